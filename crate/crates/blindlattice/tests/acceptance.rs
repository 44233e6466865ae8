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

//! Acceptance suite: one PASS/FAIL line per criterion. Runs as its own
//! binary (no libtest harness) so the lines always reach stdout.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use blindlattice::montecarlo::{
    chi_square_two_sample, chi_square_uniform, estimate_acceptance_parallel, output_counts, pooled_angle_counts,
    total_variation_counts,
};
use blindlattice::reference::output_distribution;
use blindlattice::report::{average_density_deviation, structural_twin};
use blindlattice_core::adversary::{Honest, Replacement, StrategySpec};
use blindlattice_core::analysis::{
    completeness_bound, consistency_report, epsilon_feasible_range, f_feasibility, q_lower_bound,
};
use blindlattice_core::mbqc::{
    build_lattice, check_identity, commutation_identities, gate_identities, verify_unit_implements_gate, GateLabel,
    PlacedGate, Rule, Wire,
};
use blindlattice_core::protocol::{run_protocol, Circuit, InputState, ProtocolConfig};
use blindlattice_core::Angle8;
use statrs::function::gamma::gamma_ur;

// Tolerances, fixed here once.
const IDENTITY_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-9;
const DENSITY_TOL: f64 = 1e-12;
const MIN_P: f64 = 0.01;
const ROOT_TOL: f64 = 1e-3;
const G_TOL: f64 = 1e-9;
const COMPLETENESS_SLACK: f64 = 0.03;
const SEPARATION_SIGMAS: f64 = 3.0;
const FLIP_ALL_MAX: f64 = 0.01;
const TV_MAX: f64 = 0.05;

const SEED: u64 = 20_261_018;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

type Check = fn() -> Verdict;

fn c1_identities() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for id in gate_identities().iter().chain(&commutation_identities()) {
        let c = check_identity(id).expect("identity check");
        worst = worst.max(c.max_infidelity).max(c.matrix_deviation);
        n += 1;
    }
    verdict(
        worst <= IDENTITY_TOL,
        format!("{n} identities, worst {worst:.2e} (tol {IDENTITY_TOL:e})"),
    )
}

fn c2_branch_oracle() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut branches = 0;
    let mut failures = Vec::new();
    for wire in [Wire::Top, Wire::Bottom] {
        for label in GateLabel::ALL {
            let g = PlacedGate::new(label, wire);
            match verify_unit_implements_gate(g) {
                Ok(r) => {
                    worst = worst.max(r.max_infidelity);
                    branches += r.branches_checked as usize * r.inputs_checked;
                    if r.inputs_checked != 6 {
                        failures.push(format!("{g}: {} inputs", r.inputs_checked));
                    }
                }
                Err(e) => failures.push(format!("{g}: {e}")),
            }
        }
    }
    verdict(
        failures.is_empty() && worst <= ORACLE_TOL,
        format!("16 placed gates, {branches} branch/input pairs, worst {worst:.2e} (tol {ORACLE_TOL:e}) {failures:?}"),
    )
}

/// Independent 18-state average: plain (re, im) arithmetic.
fn eighteen_average_by_hand() -> [[(f64, f64); 2]; 2] {
    let mut kets: Vec<[(f64, f64); 2]> = vec![[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 0.0)]];
    let s = 1.0 / 2f64.sqrt();
    for k in 0..8 {
        let a = k as f64 * PI / 4.0;
        for sign in [1.0, -1.0] {
            kets.push([(s, 0.0), (sign * s * a.cos(), sign * s * a.sin())]);
        }
    }
    let mut rho = [[(0.0, 0.0); 2]; 2];
    for k in &kets {
        for i in 0..2 {
            for j in 0..2 {
                // k_i · conj(k_j)
                let (a, b) = k[i];
                let (c, d) = k[j];
                rho[i][j].0 += (a * c + b * d) / 18.0;
                rho[i][j].1 += (b * c - a * d) / 18.0;
            }
        }
    }
    rho
}

fn c3_density() -> Verdict {
    let dev = average_density_deviation().expect("density");
    let hand = eighteen_average_by_hand();
    let mut hand_dev: f64 = 0.0;
    for (i, row) in hand.iter().enumerate() {
        for (j, &(re, im)) in row.iter().enumerate() {
            let want = if i == j { 0.5 } else { 0.0 };
            hand_dev = hand_dev.max(((re - want).powi(2) + im * im).sqrt());
        }
    }
    verdict(
        dev <= DENSITY_TOL && hand_dev <= DENSITY_TOL,
        format!("max |avg − I/2| = {dev:.2e}, independent sum {hand_dev:.2e} (tol {DENSITY_TOL:e})"),
    )
}

fn p_by_gamma(stat: f64, dof: f64) -> f64 {
    gamma_ur(dof / 2.0, stat / 2.0)
}

fn c4_angles() -> Verdict {
    let runs = 5000;
    let a = Circuit::new(
        vec![
            PlacedGate::top(GateLabel::H),
            PlacedGate::top(GateLabel::T),
            PlacedGate::top(GateLabel::Cnot),
        ],
        [InputState::Zero, InputState::Plus(Angle8::ZERO)],
    );
    let b = structural_twin(&a);
    let cfg = ProtocolConfig::default();
    let shape = |c: &Circuit| run_protocol(c, &cfg, &mut Honest, SEED).unwrap().shape();
    let same_structure = shape(&a) == shape(&b);
    let ca = pooled_angle_counts(&a, &cfg, runs, SEED).unwrap();
    let cb = pooled_angle_counts(&b, &cfg, runs, SEED + runs as u64).unwrap();
    let ua = chi_square_uniform(&ca).unwrap();
    let ub = chi_square_uniform(&cb).unwrap();
    let two = chi_square_two_sample(&ca, &cb).unwrap();
    // statistic and p-value recomputed by hand
    let n: u64 = ca.iter().sum();
    let e = n as f64 / 8.0;
    let stat: f64 = ca.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let p_hand = p_by_gamma(stat, 7.0);
    let agree = (stat - ua.statistic).abs() < 1e-9 && (p_hand - ua.p_value).abs() < 1e-9;
    verdict(
        same_structure && agree && ua.p_value > MIN_P && ub.p_value > MIN_P && two.p_value > MIN_P,
        format!(
            "{runs} runs each, {n} angles: uniform p = {:.4} / {:.4}, two-sample p = {:.4} (min {MIN_P}); \
             same structure {same_structure}, oracle agrees {agree}",
            ua.p_value, ub.p_value, two.p_value
        ),
    )
}

fn c5_roots() -> Verdict {
    let r = epsilon_feasible_range();
    let f_hand = |x: f64| 18.0 * x * x.sqrt() + 3.0 * x - 12.0 * x.sqrt() + 2.0;
    let f175 = f_feasibility(0.175);
    let g = q_lower_bound(1.0 / 9.0).unwrap().g;
    let e: f64 = 1.0 / 9.0;
    let g_hand = 3.0 * e / (1.0 + 3.0 * e - 6.0 * e.sqrt());
    let ok = (r.low - 0.035).abs() <= ROOT_TOL
        && (r.high - 0.384).abs() <= ROOT_TOL
        && f_hand(r.low).abs() < 1e-5
        && f_hand(r.high).abs() < 1e-5
        && (f175 - (-1.1772)).abs() <= ROOT_TOL
        && (f175 - f_hand(0.175)).abs() < 1e-12
        && (g + 0.5).abs() <= G_TOL
        && (g - g_hand).abs() <= G_TOL;
    verdict(
        ok,
        format!(
            "roots [{:.5}, {:.5}], f(0.175) = {f175:.5}, g(1/9) = {g:.12} (tol {ROOT_TOL:e} / {G_TOL:e})",
            r.low, r.high
        ),
    )
}

fn c6_completeness() -> Verdict {
    let trials = 2000;
    let c = Circuit::on_zero(&[GateLabel::I]);
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [0.0, 0.5, 1.0] {
        let cfg = ProtocolConfig {
            q,
            expected: Some(false),
            ..ProtocolConfig::default()
        };
        let e = estimate_acceptance_parallel(&c, &cfg, &StrategySpec::Honest, trials, SEED).unwrap();
        let bound = completeness_bound(q).unwrap();
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        ok &= e.ci95.0 >= bound - COMPLETENESS_SLACK;
        ok &= e.rate >= bound - 3.0 * sigma;
        if q == 1.0 {
            ok &= e.ci95.0 >= 2.0 / 3.0;
        }
        parts.push(format!(
            "q={q}: {:.4} (lower {:.4}, bound {bound:.4})",
            e.rate, e.ci95.0
        ));
    }
    verdict(ok, format!("{trials} trials; {}", parts.join("; ")))
}

fn c7_soundness() -> Verdict {
    let trials = 5000;
    let c = Circuit::on_zero(&[GateLabel::I]);
    let cfg = ProtocolConfig {
        q: 0.5,
        expected: Some(false),
        ..ProtocolConfig::default()
    };
    let honest = estimate_acceptance_parallel(&c, &cfg, &StrategySpec::Honest, trials, SEED).unwrap();
    let mut ok = true;
    let mut parts = vec![format!("honest {:.4}", honest.rate)];
    for spec in [
        StrategySpec::FakeGraph(Replacement::Uniform18),
        StrategySpec::FlipOutcomes { p: 0.5 },
    ] {
        let e = estimate_acceptance_parallel(&c, &cfg, &spec, trials, SEED).unwrap();
        let sigma = (honest.std_error().powi(2) + e.std_error().powi(2)).sqrt();
        let gap = (honest.rate - e.rate) / sigma;
        ok &= gap >= SEPARATION_SIGMAS;
        parts.push(format!("{spec} {:.4} ({gap:.1}σ below)", e.rate));
    }
    let q0 = ProtocolConfig { q: 0.0, ..cfg.clone() };
    let flip = estimate_acceptance_parallel(&c, &q0, &StrategySpec::FlipOutcomes { p: 1.0 }, trials, SEED).unwrap();
    ok &= flip.rate <= FLIP_ALL_MAX;
    parts.push(format!("flip p=1 at q=0 {:.4} (max {FLIP_ALL_MAX})", flip.rate));
    verdict(ok, format!("{trials} trials, q=0.5; {}", parts.join("; ")))
}

fn c8_decode() -> Verdict {
    let samples = 2000;
    let plus = InputState::Plus(Angle8::ZERO);
    let top = |gs: &[GateLabel]| gs.iter().map(|&g| PlacedGate::top(g)).collect::<Vec<_>>();
    let cases = [
        ("[X]", Circuit::on_zero(&[GateLabel::X])),
        ("[H,H]", Circuit::on_zero(&[GateLabel::H, GateLabel::H])),
        (
            "[CNOT] on |10>",
            Circuit::new(top(&[GateLabel::Cnot]), [InputState::One, InputState::Zero]),
        ),
        (
            "[T,T,T,T] on |+>",
            Circuit::new(top(&[GateLabel::T; 4]), [plus, InputState::Zero]),
        ),
        (
            "[T,T,T,T,H] on |+>",
            Circuit::new(
                top(&[GateLabel::T, GateLabel::T, GateLabel::T, GateLabel::T, GateLabel::H]),
                [plus, InputState::Zero],
            ),
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, c) in cases {
        let want = output_distribution(&c).unwrap();
        let counts = output_counts(&c, &ProtocolConfig::default(), samples, SEED).unwrap();
        let n: u64 = counts.iter().sum();
        let tv = total_variation_counts(&counts, &want);
        ok &= n == samples as u64 && tv <= TV_MAX;
        parts.push(format!("{name} tv={tv:.4}"));
    }
    verdict(ok, format!("{samples} samples; {} (max {TV_MAX})", parts.join(", ")))
}

/// Edge set from the construction rules, enumerated pair by pair.
fn rule_edges(m: usize, n: usize) -> BTreeSet<((usize, usize), (usize, usize))> {
    let mut out = BTreeSet::new();
    for x in 1..=m {
        for y in 1..=n {
            for x2 in 1..=m {
                for y2 in 1..=n {
                    let horizontal = x2 == x && y2 == y + 1;
                    let hit = |r: usize| y % 5 == r || (y >= 3 && (y - 2) % 5 == r);
                    let vertical = x2 == x + 1 && y2 == y && if x % 2 == 1 { hit(1) } else { hit(3) };
                    if horizontal || vertical {
                        out.insert(((x, y), (x2, y2)));
                    }
                }
            }
        }
    }
    out
}

fn c9_lattice() -> Verdict {
    let l = build_lattice(2, 5);
    let got: BTreeSet<_> = l.edges.iter().map(|e| (e.a, e.b)).collect();
    let want = rule_edges(2, 5);
    let mut ok = l.edges.len() == 10 && got == want;
    let mut pairs = 0;
    for m in 1..=8 {
        for n in 1..=15 {
            let l = build_lattice(m, n);
            let set: BTreeSet<_> = l.edges.iter().map(|e| (e.a, e.b)).collect();
            ok &= set.len() == l.edges.len() && set == rule_edges(m, n);
            ok &= l.edges.iter().all(|e| (e.rule == Rule::Horizontal) == (e.a.0 == e.b.0));
            pairs += 1;
        }
    }
    verdict(
        ok,
        format!(
            "(2,5): {} edges; all {pairs} sizes up to (8,15) match the rules",
            l.edges.len()
        ),
    )
}

fn c10_consistency() -> Verdict {
    let r = consistency_report().unwrap();
    let flagged: Vec<&str> = r.discrepancies().map(|d| d.id.as_str()).collect();
    let xi3 = flagged.iter().any(|id| id.starts_with("xi3"));
    let qb = flagged.iter().any(|id| id.starts_with("q_lower_bound"));
    verdict(xi3 && qb, format!("flagged: {}", flagged.join(", ")))
}

fn main() {
    let checks: [(&str, Check); 10] = [
        ("gate identities", c1_identities),
        ("branch oracle", c2_branch_oracle),
        ("input-average density", c3_density),
        ("angle uniformity", c4_angles),
        ("feasible range and g(1/9)", c5_roots),
        ("honest completeness", c6_completeness),
        ("soundness separation", c7_soundness),
        ("end-to-end decode", c8_decode),
        ("lattice conformance", c9_lattice),
        ("consistency report", c10_consistency),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        println!(
            "criterion {:>2} {:<26} {}  [{:.2}s] {}",
            i + 1,
            name,
            if v.ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            v.detail
        );
        failed += usize::from(!v.ok);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
