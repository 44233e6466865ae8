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

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use super::density::DensityMatrix;
use super::gate::{GateMatrix, GateSpec};
use super::{QsimError, MAX_QUBITS, MIN_BRANCH_PROB};
use crate::Angle8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single-qubit preparations a client can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Prep {
    Zero,
    One,
    /// `(|0⟩ + e^{iκ}|1⟩)/√2`
    Plus(Angle8),
    /// `(|0⟩ − e^{iκ}|1⟩)/√2`
    Minus(Angle8),
}

impl Prep {
    pub fn amplitudes(self) -> [Complex64; 2] {
        match self {
            Prep::Zero => [ONE, ZERO],
            Prep::One => [ZERO, ONE],
            Prep::Plus(a) => planar_ket(a.radians(), false),
            Prep::Minus(a) => planar_ket(a.radians(), true),
        }
    }
}

/// `|±_angle⟩`, with `minus` selecting the `−` vector.
pub fn planar_ket(angle: f64, minus: bool) -> [Complex64; 2] {
    let s = if minus { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    [Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::from_polar(s, angle)]
}

/// Result of a single-qubit measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    /// `false` ↔ the `|+_angle⟩` (or `|0⟩`) projector.
    pub outcome: bool,
    /// Renormalized post-measurement state, same register size.
    pub state: StateVector,
    /// Born probability of `outcome`.
    pub probability: f64,
}

/// Measurement basis for [`StateVector::measure_out`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Basis {
    /// `{|+_θ⟩, |−_θ⟩}` with `θ` in radians.
    Planar(f64),
    Computational,
}

impl Basis {
    fn kets(self) -> [[Complex64; 2]; 2] {
        match self {
            Basis::Planar(angle) => planar_kets(angle),
            Basis::Computational => COMPUTATIONAL,
        }
    }
}

/// Result of a destructive measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Removal {
    pub outcome: bool,
    pub probability: f64,
    /// Remaining qubits in their original order; `None` if none are left.
    pub rest: Option<StateVector>,
}

/// Normalized amplitudes over `num_qubits` qubits, qubit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Tensor product of `preps` in list order.
    pub fn prepare(preps: &[Prep]) -> Result<StateVector, QsimError> {
        if preps.is_empty() {
            return Err(QsimError::EmptyPrepList);
        }
        if preps.len() > MAX_QUBITS {
            return Err(QsimError::TooManyQubits {
                requested: preps.len(),
                max: MAX_QUBITS,
            });
        }
        let mut amps = vec![ONE];
        for p in preps {
            let [a0, a1] = p.amplitudes();
            let mut next = Vec::with_capacity(amps.len() * 2);
            for &a in &amps {
                next.push(a * a0);
                next.push(a * a1);
            }
            amps = next;
        }
        Ok(StateVector {
            num_qubits: preps.len(),
            amps,
        })
    }

    /// `|0…0⟩`.
    pub fn zeros(num_qubits: usize) -> Result<StateVector, QsimError> {
        let preps = vec![Prep::Zero; num_qubits];
        StateVector::prepare(&preps)
    }

    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<StateVector, QsimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() || amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QsimError::InvalidAmplitudes);
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            return Err(QsimError::InvalidAmplitudes);
        }
        Ok(StateVector {
            num_qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QsimError> {
        self.check_same_size(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`; `self`'s qubits come first.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, QsimError> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_QUBITS {
            return Err(QsimError::TooManyQubits {
                requested: n,
                max: MAX_QUBITS,
            });
        }
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            for &b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { num_qubits: n, amps })
    }

    /// Multiplies every amplitude by `e^{i·phase}`.
    pub fn with_global_phase(&self, phase: f64) -> StateVector {
        let w = Complex64::cis(phase);
        StateVector {
            num_qubits: self.num_qubits,
            amps: self.amps.iter().map(|a| a * w).collect(),
        }
    }

    /// Applies `gate` to `targets` and returns the new state.
    pub fn apply(&self, gate: &GateSpec, targets: &[usize]) -> Result<StateVector, QsimError> {
        let mut out = self.clone();
        out.apply_in_place(gate, targets)?;
        Ok(out)
    }

    /// In-place variant of [`apply`](Self::apply).
    pub fn apply_in_place(&mut self, gate: &GateSpec, targets: &[usize]) -> Result<(), QsimError> {
        if targets.len() != gate.arity() {
            return Err(QsimError::ArityMismatch {
                gate: gate.name(),
                expected: gate.arity(),
                got: targets.len(),
            });
        }
        for &t in targets {
            self.check_qubit(t)?;
        }
        match gate.matrix() {
            GateMatrix::Single(m) => self.apply_single(targets[0], &m),
            GateMatrix::Two(m) => {
                if targets[0] == targets[1] {
                    return Err(QsimError::DuplicateTarget(targets[0]));
                }
                self.apply_two(targets[0], targets[1], &m)
            }
        }
        Ok(())
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    fn apply_single(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) {
        let mask = self.bit(qubit);
        for i0 in 0..self.amps.len() {
            if i0 & mask != 0 {
                continue;
            }
            let i1 = i0 | mask;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    fn apply_two(&mut self, q0: usize, q1: usize, m: &[[Complex64; 4]; 4]) {
        let (b0, b1) = (self.bit(q0), self.bit(q1));
        for base in 0..self.amps.len() {
            if base & (b0 | b1) != 0 {
                continue;
            }
            let idx = [base, base | b1, base | b0, base | b0 | b1];
            let v = idx.map(|i| self.amps[i]);
            for (row, &i) in idx.iter().enumerate() {
                self.amps[i] = (0..4).map(|c| m[row][c] * v[c]).sum();
            }
        }
    }

    /// Projects `qubit` onto `⟨bra|` and drops it from the register.
    ///
    /// Returns the branch probability and the unnormalized amplitudes of the
    /// remaining `n − 1` qubits (empty when `n == 1`).
    pub(crate) fn project_out(&self, qubit: usize, ket: [Complex64; 2]) -> (f64, Vec<Complex64>) {
        let mask = self.bit(qubit);
        let low = mask - 1;
        let half = self.amps.len() / 2;
        let mut out = Vec::with_capacity(half);
        for j in 0..half {
            let i0 = ((j & !low) << 1) | (j & low);
            let i1 = i0 | mask;
            out.push(ket[0].conj() * self.amps[i0] + ket[1].conj() * self.amps[i1]);
        }
        let p = out.iter().map(|a| a.norm_sqr()).sum();
        (p, out)
    }

    fn remove(&self, qubit: usize, kets: [[Complex64; 2]; 2], outcome: bool) -> Removal {
        let (p, amps) = self.project_out(qubit, kets[usize::from(outcome)]);
        let rest = (self.num_qubits > 1).then(|| {
            let norm = libm::sqrt(p);
            let amps = if norm > 0.0 {
                amps.into_iter().map(|a| a / norm).collect()
            } else {
                amps
            };
            StateVector {
                num_qubits: self.num_qubits - 1,
                amps,
            }
        });
        Removal {
            outcome,
            probability: p,
            rest,
        }
    }

    /// Measures `qubit` in `basis` and drops it from the register.
    pub fn measure_out<R: Rng + ?Sized>(&self, qubit: usize, basis: Basis, rng: &mut R) -> Result<Removal, QsimError> {
        self.check_qubit(qubit)?;
        let kets = basis.kets();
        let (p0, _) = self.project_out(qubit, kets[0]);
        let outcome = rng.random::<f64>() >= p0;
        Ok(self.remove(qubit, kets, outcome))
    }

    /// [`measure_out`](Self::measure_out) with a prescribed outcome.
    pub fn measure_out_forced(&self, qubit: usize, basis: Basis, outcome: bool) -> Result<Removal, QsimError> {
        self.check_qubit(qubit)?;
        let r = self.remove(qubit, basis.kets(), outcome);
        if r.probability < MIN_BRANCH_PROB {
            return Err(QsimError::ZeroProbabilityForcedBranch {
                qubit,
                outcome,
                probability: r.probability,
            });
        }
        Ok(r)
    }

    fn collapse(&self, qubit: usize, kets: [[Complex64; 2]; 2], outcome: bool) -> Measurement {
        let ket = kets[usize::from(outcome)];
        let (p, reduced) = self.project_out(qubit, ket);
        let mask = self.bit(qubit);
        let low = mask - 1;
        let norm = libm::sqrt(p);
        let mut amps = vec![ZERO; self.amps.len()];
        if norm > 0.0 {
            for (j, c) in reduced.iter().enumerate() {
                let i0 = ((j & !low) << 1) | (j & low);
                amps[i0] = ket[0] * c / norm;
                amps[i0 | mask] = ket[1] * c / norm;
            }
        }
        Measurement {
            outcome,
            state: StateVector {
                num_qubits: self.num_qubits,
                amps,
            },
            probability: p,
        }
    }

    fn measure_with<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        kets: [[Complex64; 2]; 2],
        rng: &mut R,
    ) -> Result<Measurement, QsimError> {
        self.check_qubit(qubit)?;
        let (p0, _) = self.project_out(qubit, kets[0]);
        let outcome = rng.random::<f64>() >= p0;
        Ok(self.collapse(qubit, kets, outcome))
    }

    fn measure_forced_with(
        &self,
        qubit: usize,
        kets: [[Complex64; 2]; 2],
        outcome: bool,
    ) -> Result<Measurement, QsimError> {
        self.check_qubit(qubit)?;
        let m = self.collapse(qubit, kets, outcome);
        if m.probability < MIN_BRANCH_PROB {
            return Err(QsimError::ZeroProbabilityForcedBranch {
                qubit,
                outcome,
                probability: m.probability,
            });
        }
        Ok(m)
    }

    /// Projective measurement in `{|+_angle⟩, |−_angle⟩}`; outcome `false`
    /// is `|+_angle⟩`.
    pub fn measure_planar<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        angle: f64,
        rng: &mut R,
    ) -> Result<Measurement, QsimError> {
        self.measure_with(qubit, planar_kets(angle), rng)
    }

    /// Planar measurement with a prescribed outcome, for branch enumeration.
    pub fn measure_planar_forced(&self, qubit: usize, angle: f64, outcome: bool) -> Result<Measurement, QsimError> {
        self.measure_forced_with(qubit, planar_kets(angle), outcome)
    }

    pub fn measure_computational<R: Rng + ?Sized>(&self, qubit: usize, rng: &mut R) -> Result<Measurement, QsimError> {
        self.measure_with(qubit, COMPUTATIONAL, rng)
    }

    pub fn measure_computational_forced(&self, qubit: usize, outcome: bool) -> Result<Measurement, QsimError> {
        self.measure_forced_with(qubit, COMPUTATIONAL, outcome)
    }

    /// Probability that a planar measurement of `qubit` yields outcome 0.
    pub fn planar_prob_zero(&self, qubit: usize, angle: f64) -> Result<f64, QsimError> {
        self.check_qubit(qubit)?;
        Ok(self.project_out(qubit, planar_kets(angle)[0]).0)
    }

    /// Probability that `qubit` is found in `|1⟩`.
    pub fn prob_one(&self, qubit: usize) -> Result<f64, QsimError> {
        self.check_qubit(qubit)?;
        Ok(self.project_out(qubit, COMPUTATIONAL[1]).0)
    }

    /// Computational-basis distribution over all `2^n` outcomes.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced density matrix of the qubits in `keep` (in that order).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix, QsimError> {
        for (i, &q) in keep.iter().enumerate() {
            self.check_qubit(q)?;
            if keep[..i].contains(&q) {
                return Err(QsimError::DuplicateTarget(q));
            }
        }
        let k = keep.len();
        let dim = 1usize << k;
        let traced: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        let mut entries = vec![ZERO; dim * dim];
        let split = |idx: usize| -> (usize, usize) {
            let mut kept = 0;
            for &q in keep {
                kept = (kept << 1) | usize::from(idx & self.bit(q) != 0);
            }
            let mut rest = 0;
            for &q in &traced {
                rest = (rest << 1) | usize::from(idx & self.bit(q) != 0);
            }
            (kept, rest)
        };
        let parts: Vec<(usize, usize)> = (0..self.amps.len()).map(split).collect();
        for (i, &(ki, ri)) in parts.iter().enumerate() {
            for (j, &(kj, rj)) in parts.iter().enumerate() {
                if ri == rj {
                    entries[ki * dim + kj] += self.amps[i] * self.amps[j].conj();
                }
            }
        }
        DensityMatrix::from_entries(dim, entries)
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), QsimError> {
        if qubit >= self.num_qubits {
            return Err(QsimError::IndexOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_same_size(&self, other: &StateVector) -> Result<(), QsimError> {
        if self.num_qubits != other.num_qubits {
            return Err(QsimError::DimMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(())
    }
}

const COMPUTATIONAL: [[Complex64; 2]; 2] = [[ONE, ZERO], [ZERO, ONE]];

fn planar_kets(angle: f64) -> [[Complex64; 2]; 2] {
    [planar_ket(angle, false), planar_ket(angle, true)]
}

/// True iff `|⟨a|b⟩| ≥ 1 − tol`.
pub fn equal_up_to_global_phase(a: &StateVector, b: &StateVector, tol: f64) -> Result<bool, QsimError> {
    Ok(a.inner(b)?.norm() >= 1.0 - tol)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, QsimError> {
    Ok(a.inner(b)?.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn prepare_examples() {
        let s = StateVector::prepare(&[Prep::Zero]).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO]);

        let s = StateVector::prepare(&[Prep::Plus(Angle8::QUARTER_PI)]).unwrap();
        assert!(close(s.amplitudes()[0], Complex64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(s.amplitudes()[1], Complex64::cis(FRAC_PI_4) * FRAC_1_SQRT_2));

        // qubit 0 is the most significant bit: |01⟩ is index 1
        let s = StateVector::prepare(&[Prep::Zero, Prep::One]).unwrap();
        assert_eq!(s.amplitudes(), &[ZERO, ONE, ZERO, ZERO]);
    }

    #[test]
    fn prepare_errors() {
        assert_eq!(StateVector::prepare(&[]), Err(QsimError::EmptyPrepList));
        let many = vec![Prep::Zero; 25];
        assert!(matches!(
            StateVector::prepare(&many),
            Err(QsimError::TooManyQubits { requested: 25, .. })
        ));
    }

    #[test]
    fn cz_on_11_flips_sign() {
        let s = StateVector::prepare(&[Prep::One, Prep::One]).unwrap();
        let out = s.apply(&GateSpec::Cz, &[0, 1]).unwrap();
        assert!(close(out.amplitudes()[3], -ONE));
    }

    #[test]
    fn gate_errors() {
        let s = StateVector::zeros(2).unwrap();
        assert!(matches!(
            s.apply(&GateSpec::H, &[2]),
            Err(QsimError::IndexOutOfRange {
                qubit: 2,
                num_qubits: 2
            })
        ));
        assert_eq!(s.apply(&GateSpec::Cz, &[1, 1]), Err(QsimError::DuplicateTarget(1)));
        assert!(matches!(
            s.apply(&GateSpec::Cz, &[0]),
            Err(QsimError::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            })
        ));
    }

    #[test]
    fn identity_and_x_decompositions() {
        let psi = StateVector::from_amplitudes(vec![Complex64::new(0.3, -0.2), Complex64::new(0.1, 0.9)]).unwrap();
        // H·Rz(0)·H·Rz(0) = I, rightmost applied first
        let out = [GateSpec::Rz(0.0), GateSpec::H, GateSpec::Rz(0.0), GateSpec::H]
            .iter()
            .fold(psi.clone(), |s, g| s.apply(g, &[0]).unwrap());
        assert!(equal_up_to_global_phase(&out, &psi, 1e-12).unwrap());

        // e^{iπ/2}·H·Rz(π)·H·Rz(0) |0⟩ = |1⟩
        let zero = StateVector::zeros(1).unwrap();
        let out = [GateSpec::Rz(0.0), GateSpec::H, GateSpec::Rz(PI), GateSpec::H]
            .iter()
            .fold(zero, |s, g| s.apply(g, &[0]).unwrap())
            .with_global_phase(FRAC_PI_2);
        assert!(close(out.amplitudes()[1], ONE), "{:?}", out.amplitudes());
    }

    #[test]
    fn planar_measurement_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = 3.0 * FRAC_PI_4;
        let s = StateVector::prepare(&[Prep::Plus(Angle8::new(3))]).unwrap();
        let m = s.measure_planar(0, phi, &mut rng).unwrap();
        assert!(!m.outcome);
        assert!((m.probability - 1.0).abs() < 1e-12);

        let zero = StateVector::zeros(1).unwrap();
        for angle in [0.0, 0.4, 2.0, 5.5] {
            assert!((zero.planar_prob_zero(0, angle).unwrap() - 0.5).abs() < 1e-12);
        }

        let s = StateVector::prepare(&[Prep::Plus(Angle8::QUARTER_PI)]).unwrap();
        // |⟨+_0|+_{π/4}⟩|² = |1 + e^{iπ/4}|²/4
        let oracle = (ONE + Complex64::cis(FRAC_PI_4)).norm_sqr() / 4.0;
        let expected = libm::cos(FRAC_PI_8).powi(2);
        assert!((oracle - expected).abs() < 1e-14);
        assert!((s.planar_prob_zero(0, 0.0).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.85355).abs() < 1e-5);
    }

    #[test]
    fn computational_measurement_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let one = StateVector::prepare(&[Prep::One]).unwrap();
        let m = one.measure_computational(0, &mut rng).unwrap();
        assert!(m.outcome);
        assert!((m.probability - 1.0).abs() < 1e-12);

        let plus = StateVector::prepare(&[Prep::Plus(Angle8::ZERO)]).unwrap();
        let m = plus.measure_computational_forced(0, false).unwrap();
        assert!((m.probability - 0.5).abs() < 1e-12);

        let s = StateVector::from_amplitudes(vec![ONE, Complex64::new(2.0, 0.0)]).unwrap();
        let oracle = 4.0 / 5.0;
        assert!((s.prob_one(0).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn forced_zero_branch_is_rejected() {
        let zero = StateVector::zeros(1).unwrap();
        assert!(matches!(
            zero.measure_computational_forced(0, true),
            Err(QsimError::ZeroProbabilityForcedBranch { .. })
        ));
        let plus = StateVector::prepare(&[Prep::Plus(Angle8::ZERO)]).unwrap();
        assert!(plus.measure_planar_forced(0, 0.0, true).is_err());
    }

    #[test]
    fn global_phase_equality() {
        let psi = StateVector::prepare(&[Prep::Plus(Angle8::new(3)), Prep::Zero]).unwrap();
        assert!(equal_up_to_global_phase(&psi, &psi.with_global_phase(FRAC_PI_8), 1e-12).unwrap());
        let a = StateVector::prepare(&[Prep::Zero]).unwrap();
        let b = StateVector::prepare(&[Prep::One]).unwrap();
        assert!(!equal_up_to_global_phase(&a, &b, 1e-6).unwrap());
        assert!(equal_up_to_global_phase(&a, &psi, 0.1).is_err());
    }

    #[test]
    fn post_measurement_state_is_projected() {
        let psi = StateVector::prepare(&[Prep::Plus(Angle8::ZERO), Prep::Plus(Angle8::HALF_PI)]).unwrap();
        let m = psi.measure_computational_forced(1, true).unwrap();
        assert!((m.state.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(m.state.prob_one(1).unwrap() > 1.0 - 1e-12);
        // qubit 0 untouched
        assert!((m.state.planar_prob_zero(0, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_density_of_product_state() {
        let psi = StateVector::prepare(&[Prep::One, Prep::Plus(Angle8::ZERO), Prep::Zero]).unwrap();
        let rho = psi.reduced_density(&[2, 0]).unwrap();
        // |0⟩⟨0| ⊗ |1⟩⟨1| in the (q2, q0) order is the |01⟩ projector
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert!((rho.get(i, j) - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }
}
