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

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::sqrt;

use super::AnalysisError;

fn check_unit(name: &'static str, value: f64) -> Result<(), AnalysisError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(AnalysisError::DomainError { name, value })
    }
}

/// Honest acceptance lower bound `1 − q/3`.
pub fn completeness_bound(q: f64) -> Result<f64, AnalysisError> {
    check_unit("q", q)?;
    Ok(1.0 - q / 3.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Soundness {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

/// The three acceptance upper bounds for a server that fails a test with
/// probability `ε`, in their closed forms.
pub fn soundness_bounds(q: f64, epsilon: f64) -> Result<Soundness, AnalysisError> {
    check_unit("q", q)?;
    check_unit("epsilon", epsilon)?;
    Ok(Soundness {
        xi1: 1.0 - (1.0 - q) * epsilon,
        xi2: 1.0 - epsilon / 2.0 + (epsilon / 2.0 - 2.0 / 3.0) * q,
        xi3: 1.0 - (1.0 / 3.0 - 2.0 * sqrt(epsilon)) * q,
    })
}

/// Every stated expression involving `ξ3`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Xi3Forms {
    /// `(2/3 + 2√ε)q + (1−q)/2 + (1−q)/2`.
    pub definition: f64,
    /// `1 − (1/3 − 2√ε)q`.
    pub closed: f64,
    /// `ξ1 − ξ3` written as `−(1−q)ε + (2/3 − 2√ε)q`.
    pub difference_middle: f64,
    /// `ξ1 − ξ3` written as `−ε + (1/3 + ε − 2√ε)q`.
    pub difference_final: f64,
    /// `ξ1 − ξ3` from the closed forms.
    pub difference_direct: f64,
}

pub fn xi3_forms(q: f64, epsilon: f64) -> Result<Xi3Forms, AnalysisError> {
    let s = soundness_bounds(q, epsilon)?;
    let r = sqrt(epsilon);
    Ok(Xi3Forms {
        definition: (2.0 / 3.0 + 2.0 * r) * q + (1.0 - q) / 2.0 + (1.0 - q) / 2.0,
        closed: s.xi3,
        difference_middle: -(1.0 - q) * epsilon + (2.0 / 3.0 - 2.0 * r) * q,
        difference_final: -epsilon + (1.0 / 3.0 + epsilon - 2.0 * r) * q,
        difference_direct: s.xi1 - s.xi3,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QBound {
    /// `g(ε) = 3ε / (1 + 3ε − 6√ε)`.
    pub g: f64,
    /// `3ε / (4 + 3ε)`, from `ξ1 ≥ ξ2`.
    pub companion: f64,
    /// `1 + 3ε − 6√ε`; negative means `q ≥ g` constrains nothing.
    pub denominator: f64,
}

impl QBound {
    pub fn is_negative(&self) -> bool {
        self.g < 0.0
    }

    /// The larger of the two lower bounds.
    pub fn binding(&self) -> f64 {
        self.g.max(self.companion)
    }
}

/// Lower bounds on `q` that make `ξ1` the largest of the three.
pub fn q_lower_bound(epsilon: f64) -> Result<QBound, AnalysisError> {
    check_unit("epsilon", epsilon)?;
    let denominator = 1.0 + 3.0 * epsilon - 6.0 * sqrt(epsilon);
    if denominator.abs() < 1e-12 {
        return Err(AnalysisError::SingularDenominator { epsilon });
    }
    Ok(QBound {
        g: 3.0 * epsilon / denominator,
        companion: 3.0 * epsilon / (4.0 + 3.0 * epsilon),
        denominator,
    })
}

/// `f(x) = 18x√x + 3x − 12√x + 2`; `f ≤ 0` is the feasibility condition on `ε`.
pub fn f_feasibility(x: f64) -> f64 {
    let r = sqrt(x);
    18.0 * x * r + 3.0 * x - 12.0 * r + 2.0
}

/// `f′(x) = 27√x + 3 − 6/√x`.
pub fn f_feasibility_prime(x: f64) -> f64 {
    let r = sqrt(x);
    27.0 * r + 3.0 - 6.0 / r
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeasibleRange {
    pub low: f64,
    pub high: f64,
    /// Zero of `f′`, where `f` is smallest.
    pub stationary: f64,
    pub f_at_stationary: f64,
}

/// Bisection on a bracket with a sign change; `increasing` says which way.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, increasing: bool) -> f64 {
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The interval of `ε ∈ [0, 1]` with `f(ε) ≤ 0`.
pub fn epsilon_feasible_range() -> FeasibleRange {
    // f′ increases from −∞ at 0+ to 24 at 1
    let stationary = bisect(f_feasibility_prime, 1e-12, 1.0, true);
    FeasibleRange {
        low: bisect(f_feasibility, 0.0, stationary, false),
        high: bisect(f_feasibility, stationary, 1.0, true),
        stationary,
        f_at_stationary: f_feasibility(stationary),
    }
}

/// Everything the bounds say about one `(q, ε)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub q: f64,
    pub epsilon: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub completeness_bound: f64,
    /// `g(ε)`; `None` where its denominator vanishes.
    pub q_lower_bound: Option<f64>,
    pub q_lower_bound_companion: f64,
    pub feasible_epsilon: (f64, f64),
    pub epsilon_feasible: bool,
}

impl BoundReport {
    pub fn new(q: f64, epsilon: f64) -> Result<BoundReport, AnalysisError> {
        let s = soundness_bounds(q, epsilon)?;
        let range = epsilon_feasible_range();
        let (g, companion) = match q_lower_bound(epsilon) {
            Ok(b) => (Some(b.g), b.companion),
            Err(AnalysisError::SingularDenominator { .. }) => (None, 3.0 * epsilon / (4.0 + 3.0 * epsilon)),
            Err(e) => return Err(e),
        };
        Ok(BoundReport {
            q,
            epsilon,
            xi1: s.xi1,
            xi2: s.xi2,
            xi3: s.xi3,
            completeness_bound: completeness_bound(q)?,
            q_lower_bound: g,
            q_lower_bound_companion: companion,
            feasible_epsilon: (range.low, range.high),
            epsilon_feasible: (range.low..=range.high).contains(&epsilon),
        })
    }
}

/// Grid check of "`ε ≥ 2/(3(1−q))` implies `ξ1 ≤ 1/3`".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridCheck {
    pub points: usize,
    /// Points with `ε` feasible and `q` at or above both lower bounds.
    pub eligible: usize,
    /// Eligible points where the premise holds.
    pub premise_holds: usize,
    /// Eligible points where the premise holds and `ξ1 > 1/3`.
    pub failures: usize,
    /// The same over the whole unit square.
    pub square_premise_holds: usize,
    pub square_failures: usize,
}

fn premise(q: f64, epsilon: f64) -> bool {
    q < 1.0 && epsilon >= 2.0 / (3.0 * (1.0 - q))
}

/// `n × n` grid; `ε` spans the feasible range, `q` spans `[0, 1]`.
pub fn premise_grid_check(n: usize) -> Result<GridCheck, AnalysisError> {
    let range = epsilon_feasible_range();
    let step = |i: usize, lo: f64, hi: f64| {
        if n < 2 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut out = GridCheck {
        points: n * n,
        eligible: 0,
        premise_holds: 0,
        failures: 0,
        square_premise_holds: 0,
        square_failures: 0,
    };
    for i in 0..n {
        let eps = step(i, range.low, range.high);
        let bound = q_lower_bound(eps)?.binding();
        for j in 0..n {
            let q = step(j, 0.0, 1.0);
            if q >= bound {
                out.eligible += 1;
                if premise(q, eps) {
                    out.premise_holds += 1;
                    if soundness_bounds(q, eps)?.xi1 > 1.0 / 3.0 + 1e-12 {
                        out.failures += 1;
                    }
                }
            }
            let eps_sq = step(i, 0.0, 1.0);
            if premise(q, eps_sq) {
                out.square_premise_holds += 1;
                if soundness_bounds(q, eps_sq)?.xi1 > 1.0 / 3.0 + 1e-12 {
                    out.square_failures += 1;
                }
            }
        }
    }
    Ok(out)
}

/// One numerical comparison between stated formulas.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Discrepancy {
    pub id: String,
    pub consistent: bool,
    pub detail: String,
    /// Largest disagreement found, in the natural units of the check.
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConsistencyReport {
    pub checks: Vec<Discrepancy>,
}

impl ConsistencyReport {
    pub fn discrepancies(&self) -> impl Iterator<Item = &Discrepancy> {
        self.checks.iter().filter(|d| !d.consistent)
    }

    pub fn get(&self, id: &str) -> Option<&Discrepancy> {
        self.checks.iter().find(|d| d.id == id)
    }
}

const GRID: usize = 101;

fn grid() -> impl Iterator<Item = (f64, f64)> {
    (0..GRID).flat_map(|i| (0..GRID).map(move |j| (i as f64 / (GRID - 1) as f64, j as f64 / (GRID - 1) as f64)))
}

/// Compares the stated bound formulas with each other numerically.
pub fn consistency_report() -> Result<ConsistencyReport, AnalysisError> {
    let mut checks = Vec::new();
    let tol = 1e-12;

    let mut def_vs_closed: f64 = 0.0;
    let mut middle: f64 = 0.0;
    let mut fin: f64 = 0.0;
    for (q, eps) in grid() {
        let f = xi3_forms(q, eps)?;
        def_vs_closed = def_vs_closed.max((f.definition - f.closed).abs());
        middle = middle.max((f.difference_middle - f.difference_direct).abs());
        fin = fin.max((f.difference_final - f.difference_direct).abs());
    }
    checks.push(Discrepancy {
        id: "xi3_definition_vs_closed_form".into(),
        consistent: def_vs_closed <= tol,
        detail: "(2/3+2√ε)q + (1−q) against 1 − (1/3 − 2√ε)q".into(),
        magnitude: def_vs_closed,
    });
    checks.push(Discrepancy {
        id: "xi3_difference_middle_line".into(),
        consistent: middle <= tol,
        detail: format!(
            "ξ1 − ξ3 is written with (2/3 − 2√ε)q although ξ3 carries (1/3 − 2√ε)q; off by q/3, max {middle:.6} at q = 1"
        ),
        magnitude: middle,
    });
    checks.push(Discrepancy {
        id: "xi3_difference_final_line".into(),
        consistent: fin <= tol,
        detail: "−ε + (1/3 + ε − 2√ε)q against ξ1 − ξ3 from the closed forms; it does not follow from the middle line"
            .into(),
        magnitude: fin,
    });

    let range = epsilon_feasible_range();
    let singular = {
        let r = 1.0 - sqrt(2.0 / 3.0);
        r * r
    };
    let mut g_max = f64::NEG_INFINITY;
    let mut all_negative = true;
    for i in 0..=1000 {
        let eps = range.low + (range.high - range.low) * i as f64 / 1000.0;
        let b = q_lower_bound(eps)?;
        g_max = g_max.max(b.g);
        all_negative &= b.is_negative();
    }
    checks.push(Discrepancy {
        id: "q_lower_bound_sign".into(),
        consistent: !all_negative,
        detail: format!(
            "1 + 3ε − 6√ε < 0 on the whole feasible range [{:.4}, {:.4}] (it vanishes at ε = {singular:.5}), so \
             g(ε) ≤ {g_max:.4} and q ≥ g(ε) holds for every q in [0, 1]",
            range.low, range.high
        ),
        magnitude: g_max,
    });

    let mut wrong_max: f64 = 0.0;
    for i in 0..=1000 {
        let eps = range.low + (range.high - range.low) * i as f64 / 1000.0;
        let b = q_lower_bound(eps)?;
        if b.companion > b.g {
            wrong_max = wrong_max.max(b.companion - b.g);
        }
    }
    checks.push(Discrepancy {
        id: "q_lower_bound_max".into(),
        consistent: wrong_max == 0.0,
        detail: "max{3ε/(4+3ε), g(ε)} is stated to be g(ε), but 3ε/(4+3ε) > 0 > g(ε) on the feasible range".into(),
        magnitude: wrong_max,
    });

    let needed = 2.0 / 3.0;
    checks.push(Discrepancy {
        id: "premise_vacuous".into(),
        consistent: needed <= range.high,
        detail: format!(
            "ε ≥ 2/(3(1−q)) needs ε ≥ 2/3 for any q, but feasible ε stop at {:.4}; no feasible point satisfies it",
            range.high
        ),
        magnitude: needed - range.high,
    });

    let fp = range.f_at_stationary;
    checks.push(Discrepancy {
        id: "f_minimum".into(),
        consistent: (fp - (-1.1772)).abs() < 1e-3 && (range.stationary - 0.175).abs() < 1e-3,
        detail: format!("f′ = 0 at x = {:.5}, f = {fp:.5}", range.stationary),
        magnitude: (fp - (-1.1772)).abs(),
    });

    Ok(ConsistencyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completeness_values() {
        assert_eq!(completeness_bound(0.0).unwrap(), 1.0);
        assert!((completeness_bound(1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let v = completeness_bound(i as f64 / 100.0).unwrap();
            assert!(v >= 2.0 / 3.0 - 1e-15 && v < prev);
            prev = v;
        }
        assert!(matches!(
            completeness_bound(1.2),
            Err(AnalysisError::DomainError { name: "q", .. })
        ));
    }

    #[test]
    fn soundness_values() {
        let s = soundness_bounds(0.0, 0.384).unwrap();
        assert!((s.xi1 - 0.616).abs() < 1e-12);
        assert!((s.xi2 - (1.0 - 0.192)).abs() < 1e-12);
        assert!((s.xi3 - 1.0).abs() < 1e-12);
        for eps in [0.0, 0.3, 1.0] {
            assert!((soundness_bounds(1.0, eps).unwrap().xi1 - 1.0).abs() < 1e-15);
        }
        assert!(soundness_bounds(0.5, -0.1).is_err());
        // ξ1 increases with q for ε > 0
        let a = soundness_bounds(0.2, 0.3).unwrap().xi1;
        let b = soundness_bounds(0.6, 0.3).unwrap().xi1;
        assert!(b > a);
    }

    #[test]
    fn q_bounds() {
        let b = q_lower_bound(0.0).unwrap();
        assert_eq!((b.g, b.companion), (0.0, 0.0));
        let b = q_lower_bound(1.0 / 9.0).unwrap();
        assert!((b.g + 0.5).abs() < 1e-9);
        let b = q_lower_bound(0.2).unwrap();
        assert!(b.is_negative());
        assert!((b.g - 0.6 / (1.6 - 6.0 * libm::sqrt(0.2))).abs() < 1e-12);
        let r = 1.0 - libm::sqrt(2.0 / 3.0);
        assert!(matches!(
            q_lower_bound(r * r),
            Err(AnalysisError::SingularDenominator { .. })
        ));
    }

    #[test]
    fn feasible_range() {
        let r = epsilon_feasible_range();
        assert!((r.low - 0.035).abs() < 1e-3 && (r.high - 0.384).abs() < 1e-3);
        assert!(f_feasibility(r.low).abs() < 1e-5 && f_feasibility(r.high).abs() < 1e-5);
        assert!((r.stationary - 0.175).abs() < 1e-3);
        assert!((f_feasibility(0.175) + 1.1772).abs() < 1e-3);
        assert!(f_feasibility_prime(r.stationary).abs() < 1e-6);
        assert!(f_feasibility(0.01) > 0.0 && f_feasibility(0.9) > 0.0);
    }

    #[test]
    fn stationary_point_closed_form() {
        // f′ = 0 is 27s² + 3s − 6 = 0 in s = √x
        let s = (-3.0 + libm::sqrt(9.0 + 4.0 * 27.0 * 6.0)) / 54.0;
        assert!((epsilon_feasible_range().stationary - s * s).abs() < 1e-9);
    }

    #[test]
    fn report_flags_known_problems() {
        let rep = consistency_report().unwrap();
        let bad: Vec<&str> = rep.discrepancies().map(|d| d.id.as_str()).collect();
        for id in [
            "xi3_difference_middle_line",
            "q_lower_bound_sign",
            "q_lower_bound_max",
            "premise_vacuous",
        ] {
            assert!(bad.contains(&id), "{id} missing from {bad:?}");
        }
        assert!(rep.get("xi3_definition_vs_closed_form").unwrap().consistent);
        assert!(rep.get("xi3_difference_final_line").unwrap().consistent);
        assert!(rep.get("f_minimum").unwrap().consistent);
        assert!((rep.get("xi3_difference_middle_line").unwrap().magnitude - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn grid_implication() {
        let g = premise_grid_check(50).unwrap();
        assert_eq!(g.points, 2500);
        assert!(g.eligible > 0);
        assert_eq!(g.premise_holds, 0);
        assert_eq!(g.failures, 0);
        assert!(g.square_premise_holds > 0);
        assert_eq!(g.square_failures, 0);
    }

    #[test]
    fn report_is_complete() {
        let r = BoundReport::new(0.5, 0.2).unwrap();
        assert!(r.epsilon_feasible && r.q_lower_bound.unwrap() < 0.0);
        assert!((r.completeness_bound - (1.0 - 0.5 / 3.0)).abs() < 1e-15);
        assert!(BoundReport::new(0.5, 0.01).unwrap().q_lower_bound.unwrap() > 0.0);
    }
}
