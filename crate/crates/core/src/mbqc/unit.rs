// Copyright 2026 The blindlattice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use alloc::vec::Vec;

use super::Wire;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum UnitKind {
    Six,
    Eight,
}

impl UnitKind {
    /// Columns per wire.
    pub fn width(self) -> usize {
        match self {
            UnitKind::Six => 3,
            UnitKind::Eight => 4,
        }
    }

    /// Columns joined by a vertical CZ.
    pub fn vertical_columns(self) -> [usize; 2] {
        [0, 2]
    }

    /// Largest number of second-stage traps a unit of this kind may carry.
    pub fn r2_cap(self) -> usize {
        match self {
            UnitKind::Six => 6,
            UnitKind::Eight => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnitKind::Six => "six",
            UnitKind::Eight => "eight",
        }
    }
}

/// A two-wire ladder cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterUnit {
    pub kind: UnitKind,
    pub edges: Vec<(usize, usize)>,
}

impl ClusterUnit {
    pub fn new(kind: UnitKind) -> ClusterUnit {
        let w = kind.width();
        let mut edges = Vec::new();
        for wire in 0..2 {
            for col in 0..w - 1 {
                edges.push((wire * w + col, wire * w + col + 1));
            }
        }
        for col in kind.vertical_columns() {
            edges.push((col, w + col));
        }
        ClusterUnit { kind, edges }
    }

    pub fn width(&self) -> usize {
        self.kind.width()
    }

    pub fn num_vertices(&self) -> usize {
        2 * self.width()
    }

    pub fn vertex(&self, wire: Wire, col: usize) -> usize {
        wire.index() * self.width() + col
    }

    pub fn wire_of(&self, v: usize) -> Wire {
        if v < self.width() {
            Wire::Top
        } else {
            Wire::Bottom
        }
    }

    pub fn column_of(&self, v: usize) -> usize {
        v % self.width()
    }

    pub fn input(&self, wire: Wire) -> usize {
        self.vertex(wire, 0)
    }

    pub fn output(&self, wire: Wire) -> usize {
        self.vertex(wire, self.width() - 1)
    }

    pub fn is_output(&self, v: usize) -> bool {
        self.column_of(v) == self.width() - 1
    }

    /// Number of vertices measured inside the unit.
    pub fn num_measured(&self) -> usize {
        self.num_vertices() - 2
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Flow successor: the next vertex on the same wire.
    pub fn successor(&self, v: usize) -> Option<usize> {
        (!self.is_output(v)).then_some(v + 1)
    }
}
