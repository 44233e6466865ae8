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

/// Lattice site `(row, column)`, both 1-based.
pub type Site = (usize, usize);

/// Which construction rule produced an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Rule {
    /// Horizontal neighbours on one row.
    Horizontal,
    /// Odd rows, columns `y` and `y + 2` with `y ≡ 1 (mod 5)`.
    OddVertical,
    /// Even rows, columns `y` and `y + 2` with `y ≡ 3 (mod 5)`.
    EvenVertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatticeEdge {
    pub a: Site,
    pub b: Site,
    pub rule: Rule,
}

/// The `m × n` latticed state as a CZ edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatticeSpec {
    pub m: usize,
    pub n: usize,
    pub edges: Vec<LatticeEdge>,
}

impl LatticeSpec {
    pub fn num_sites(&self) -> usize {
        self.m * self.n
    }

    pub fn contains(&self, a: Site, b: Site) -> bool {
        self.edges
            .iter()
            .any(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }
}

/// Builds the lattice edges, clipped to the grid. Edges are listed row by
/// row: horizontals first, then verticals in column order.
pub fn build_lattice(m: usize, n: usize) -> LatticeSpec {
    let mut edges = Vec::new();
    for x in 1..=m {
        for y in 1..n {
            edges.push(LatticeEdge {
                a: (x, y),
                b: (x, y + 1),
                rule: Rule::Horizontal,
            });
        }
    }
    for x in 1..m {
        let (rule, start) = if x % 2 == 1 {
            (Rule::OddVertical, 1)
        } else {
            (Rule::EvenVertical, 3)
        };
        let mut y = start;
        while y <= n {
            for col in [y, y + 2] {
                if col <= n {
                    edges.push(LatticeEdge {
                        a: (x, col),
                        b: (x + 1, col),
                        rule,
                    });
                }
            }
            y += 5;
        }
    }
    LatticeSpec { m, n, edges }
}

/// Classifies a vertical edge `(x, y)–(x + 1, y)` by the rule predicates
/// alone, independent of [`build_lattice`]. `None` if no rule allows it.
pub fn vertical_rule(x: usize, y: usize) -> Option<Rule> {
    let hit = |start: usize| y % 5 == start % 5 || (y >= start + 2 && (y - 2) % 5 == start % 5);
    match (x % 2 == 1, hit(1), hit(3)) {
        (true, true, _) => Some(Rule::OddVertical),
        (false, _, true) => Some(Rule::EvenVertical),
        _ => None,
    }
}
