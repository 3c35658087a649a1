//! Preparation unitaries: `U` on `system ⊗ purifier` with `U|0⟩|0⟩ = |ρ⟩`,
//! a purification of the target density operator.

use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{vector_norm, ComplexMatrix};
use crate::pauli::PauliSum;
use crate::scalar::{cr, Real, C};

/// Default target accuracy plugged into the thermal-state cost formula.
pub const THERMAL_COST_EPS: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct PreparationUnitary<T> {
    unitary: ComplexMatrix<T>,
    purifier_dim: usize,
    system_dim: usize,
    cost: u64,
    zero_state_index: usize,
}

impl<T: Real> PreparationUnitary<T> {
    pub fn from_parts(
        unitary: ComplexMatrix<T>,
        system_dim: usize,
        purifier_dim: usize,
        cost: u64,
    ) -> Result<Self> {
        if unitary.rows() != system_dim * purifier_dim || !unitary.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "preparation unitary is {}x{}, expected {}",
                unitary.rows(),
                unitary.cols(),
                system_dim * purifier_dim
            )));
        }
        let dev = unitary.unitary_deviation();
        if dev > T::lit(1e-10) {
            return Err(Error::NotUnitary { deviation: dev.to_f64_lossy() });
        }
        Ok(Self { unitary, purifier_dim, system_dim, cost, zero_state_index: 0 })
    }

    /// Completes a purification vector (system-major, length D·l) to a unitary.
    pub fn from_purification(state: &[C<T>], system_dim: usize, cost: u64) -> Result<Self> {
        if system_dim == 0 || !state.len().is_multiple_of(system_dim) {
            return Err(Error::DimensionMismatch(format!(
                "purification of length {} does not factor over system dimension {system_dim}",
                state.len()
            )));
        }
        let u = ComplexMatrix::unitary_with_first_column(state)?;
        Self::from_parts(u, system_dim, state.len() / system_dim, cost)
    }

    pub fn unitary(&self) -> &ComplexMatrix<T> {
        &self.unitary
    }

    pub fn purifier_dim(&self) -> usize {
        self.purifier_dim
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn zero_state_index(&self) -> usize {
        self.zero_state_index
    }

    /// |ρ⟩ = U |0⟩|0⟩_l.
    pub fn state(&self) -> Vec<C<T>> {
        self.unitary.column(self.zero_state_index)
    }

    /// |ρ⟩ reshaped to a D×l matrix (row = system index).
    pub fn state_matrix(&self) -> ComplexMatrix<T> {
        let v = self.state();
        ComplexMatrix::new(self.system_dim, self.purifier_dim, v).expect("shape")
    }

    /// Tr_l |ρ⟩⟨ρ|.
    pub fn reduced_density(&self) -> ComplexMatrix<T> {
        let psi = self.state_matrix();
        psi.matmul(&psi.adjoint())
    }
}

/// Pure state, no purifier.
pub fn prepare_pure<T: Real>(v: &[C<T>]) -> Result<PreparationUnitary<T>> {
    let norm = vector_norm(v);
    if (norm - T::one()).abs() > T::lit(1e-10) {
        return Err(Error::NotNormalized { norm: norm.to_f64_lossy() });
    }
    PreparationUnitary::from_purification(v, v.len(), v.len() as u64)
}

/// Computational basis state |index⟩ in dimension `dim`.
pub fn prepare_basis<T: Real>(dim: usize, index: usize) -> Result<PreparationUnitary<T>> {
    if index >= dim {
        return Err(Error::OutOfRange(format!("basis index {index} outside dimension {dim}")));
    }
    let mut v = vec![C::zero(); dim];
    v[index] = C::one();
    prepare_pure(&v)
}

/// Smallest k with (2k+1)·arcsin β ≥ π/2 and γ = sin(π/(2(2k+1)))/β, so that
/// sin((2k+1)·arcsin(γβ)) = 1 holds exactly.
pub fn exact_amplification_params<T: Real>(beta: T) -> Result<(usize, T)> {
    if !(beta > T::zero() && beta <= T::one()) {
        return Err(Error::OutOfRange(format!("beta must lie in (0,1], got {beta}")));
    }
    let theta = beta.asin();
    let half_pi = T::FRAC_PI_2();
    let mut k = ((half_pi / theta - T::one()) / T::lit(2.0)).ceil().max(T::zero()).to_usize().unwrap_or(0);
    // Guard the ceiling against rounding on either side.
    while k > 0 && T::from_usize_lossy(2 * k - 1) * theta >= half_pi {
        k -= 1;
    }
    while T::from_usize_lossy(2 * k + 1) * theta < half_pi {
        k += 1;
    }
    let gamma = (T::PI() / T::from_usize_lossy(2 * (2 * k + 1))).sin() / beta;
    Ok((k, gamma.min(T::one())))
}

/// The literal circuit behind the exact maximally-mixed preparation: Bell
/// state on C^N⊗C^N (N = 2^⌈log₂D⌉), flag-qubit rotation by γ, and k rounds of
/// the Grover operator G = U'(I − 2|0⟩⟨0|)U'†(I − 2Π_H).
#[derive(Clone, Debug)]
pub struct BellAmplification<T> {
    pub system_dim: usize,
    pub register_dim: usize,
    pub beta: T,
    pub gamma: T,
    pub rounds: usize,
    /// U' on C^N ⊗ C^N ⊗ C^2 (flag least significant).
    pub flagged_bell: ComplexMatrix<T>,
    /// G.
    pub grover: ComplexMatrix<T>,
    /// G^k U'|0⟩.
    pub output: Vec<C<T>>,
}

impl<T: Real> BellAmplification<T> {
    pub fn new(system_dim: usize) -> Result<Self> {
        if system_dim == 0 {
            return Err(Error::OutOfRange("system dimension must be positive".into()));
        }
        let n_qubits = ceil_log2(system_dim);
        let n = 1usize << n_qubits;
        let beta = (T::from_usize_lossy(system_dim) / T::from_usize_lossy(n)).sqrt();
        let (rounds, gamma) = exact_amplification_params(beta)?;

        let bell = bell_circuit::<T>(n_qubits);
        // Flag rotation |0⟩ → γ|0⟩ + √(1−γ²)|1⟩, then U controlled on flag = 0.
        let s = (T::one() - gamma * gamma).max(T::zero()).sqrt();
        let rot = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (1, 0) => cr(s),
            (0, 1) => cr(-s),
            _ => cr(gamma),
        });
        let big = n * n;
        let mut controlled = ComplexMatrix::zeros(2 * big, 2 * big);
        for r in 0..big {
            for c in 0..big {
                controlled[(2 * r, 2 * c)] = bell[(r, c)];
            }
            controlled[(2 * r + 1, 2 * r + 1)] = C::one();
        }
        let flagged_bell = controlled.matmul(&ComplexMatrix::identity(big).kron(&rot));

        let dim = 2 * big;
        let mut reflect_zero = ComplexMatrix::identity(dim);
        reflect_zero[(0, 0)] = -C::<T>::one();
        let mut reflect_good = ComplexMatrix::identity(dim);
        for idx in 0..dim {
            let first = idx / (2 * n);
            let flag = idx % 2;
            if first < system_dim && flag == 0 {
                reflect_good[(idx, idx)] = -C::<T>::one();
            }
        }
        let grover = flagged_bell
            .matmul(&reflect_zero)
            .matmul(&flagged_bell.adjoint())
            .matmul(&reflect_good);

        let mut output = flagged_bell.column(0);
        for _ in 0..rounds {
            output = grover.matvec(&output);
        }
        Ok(Self { system_dim, register_dim: n, beta, gamma, rounds, flagged_bell, grover, output })
    }

    /// |Bell(H)⟩|0⟩ embedded in C^N ⊗ C^N ⊗ C^2.
    pub fn target(&self) -> Vec<C<T>> {
        let n = self.register_dim;
        let amp = cr(T::one() / T::from_usize_lossy(self.system_dim).sqrt());
        let mut v = vec![C::zero(); 2 * n * n];
        for i in 0..self.system_dim {
            v[(i * n + i) * 2] = amp;
        }
        v
    }
}

/// Exact purification of I/D obtained by amplitude amplification of a Bell
/// pair on the enclosing qubit register. Purifier = second register ⊗ flag.
pub fn prepare_maximally_mixed<T: Real>(system_dim: usize) -> Result<PreparationUnitary<T>> {
    let amp = BellAmplification::<T>::new(system_dim)?;
    let n = amp.register_dim;
    let l = 2 * n;
    // Global phase of G^k U'|0⟩ is ±1; fix it so the Bell amplitudes are positive.
    let pivot = amp.output[0];
    let phase = if pivot.norm() > T::zero() { pivot / cr(pivot.norm()) } else { C::one() };
    let restricted: Vec<C<T>> = amp.output[..system_dim * l].iter().map(|&x| x / phase).collect();
    let leak = vector_norm(&amp.output[system_dim * l..]);
    if leak > T::lit(1e-9) {
        return Err(Error::Certification(format!("amplified state leaks {leak} outside the system subspace")));
    }
    let norm = vector_norm(&restricted);
    let restricted: Vec<C<T>> = restricted.iter().map(|&x| x / cr(norm)).collect();
    let cost = 2 * ceil_log2(system_dim) as u64;
    PreparationUnitary::from_purification(&restricted, system_dim, cost)
}

/// Purification Σᵢ √(e^{−βEᵢ}/Z) |ψᵢ⟩|i⟩ of the Gibbs state, plus the
/// resource estimate Qα·√(Dβ/Z)·ln(√(D/Z)/ε) with unit constant.
pub fn prepare_thermal<T: Real>(h: &PauliSum<T>, beta: T) -> Result<(PreparationUnitary<T>, f64)> {
    if !(beta >= T::zero()) {
        return Err(Error::OutOfRange(format!("inverse temperature must be nonnegative, got {beta}")));
    }
    let (vals, vecs) = h.matrix().eig_hermitian()?;
    let d = vals.len();
    let e_min = vals[0];
    let boltz: Vec<T> = vals.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
    let z_shift = boltz.iter().fold(T::zero(), |a, &b| a + b);
    let mut state = vec![C::zero(); d * d];
    for (i, &w) in boltz.iter().enumerate() {
        let amp = (w / z_shift).sqrt();
        for s in 0..d {
            state[s * d + i] = vecs[(s, i)] * cr(amp);
        }
    }
    let beta_f = beta.to_f64_lossy();
    // Z = Tr e^{−βH} = e^{−βE_min}·Σ e^{−β(E−E_min)}.
    let ln_z = -beta_f * e_min.to_f64_lossy() + z_shift.to_f64_lossy().ln();
    let cost = thermal_cost(h.len() as f64, h.scale().to_f64_lossy(), d as f64, beta_f, ln_z, THERMAL_COST_EPS);
    let prep = PreparationUnitary::from_purification(&state, d, cost.ceil() as u64)?;
    Ok((prep, cost))
}

/// Qα·√(Dβ/Z)·ln(√(D/Z)/ε), with Z passed as ln Z. The logarithm is clamped at
/// zero so the estimate never turns negative for very large Z.
pub fn thermal_cost(q: f64, alpha: f64, d: f64, beta: f64, ln_z: f64, eps: f64) -> f64 {
    let d_over_z = (d.ln() - ln_z).exp();
    let log_term = (0.5 * (d.ln() - ln_z) - eps.ln()).max(0.0);
    q * alpha * (beta * d_over_z).sqrt() * log_term
}

fn ceil_log2(d: usize) -> usize {
    d.next_power_of_two().trailing_zeros() as usize
}

/// H^{⊗n} on the first register followed by a CNOT fan-out into the second.
fn bell_circuit<T: Real>(n_qubits: usize) -> ComplexMatrix<T> {
    let n = 1usize << n_qubits;
    let h = T::one() / T::lit(2.0).sqrt();
    let had = ComplexMatrix::from_fn(2, 2, |i, j| cr(if i == 1 && j == 1 { -h } else { h }));
    let mut hn = ComplexMatrix::<T>::identity(1);
    for _ in 0..n_qubits {
        hn = hn.kron(&had);
    }
    let layer = hn.kron(&ComplexMatrix::identity(n));
    let mut fanout = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            fanout[(i * n + (j ^ i), i * n + j)] = C::one();
        }
    }
    fanout.matmul(&layer)
}

/// State description used by the command-line front end.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    /// Amplitudes are normalized on load.
    Pure(Vec<Complex<f64>>),
    Mixed,
    Thermal(f64),
    Basis(usize),
}

impl StateSpec {
    pub fn build<T: Real>(&self, hamiltonian: Option<&PauliSum<T>>, dim: usize) -> Result<PreparationUnitary<T>> {
        match self {
            StateSpec::Pure(amps) => {
                if amps.len() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "state has {} amplitudes, system dimension is {dim}",
                        amps.len()
                    )));
                }
                let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(Error::NotNormalized { norm });
                }
                let v: Vec<C<T>> = amps.iter().map(|a| Complex::new(T::lit(a.re / norm), T::lit(a.im / norm))).collect();
                prepare_pure(&v)
            }
            StateSpec::Mixed => prepare_maximally_mixed(dim),
            StateSpec::Basis(i) => prepare_basis(dim, *i),
            StateSpec::Thermal(beta) => {
                let h = hamiltonian
                    .ok_or_else(|| Error::OutOfRange("thermal state needs a Hamiltonian".into()))?;
                Ok(prepare_thermal(h, T::lit(*beta))?.0)
            }
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    /// `pure <amplitudes>` | `mixed` | `thermal <beta>` | `basis <index>`.
    /// An amplitude is `re` or `re,im`. `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut found = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |message: String| Error::Parse { line: idx + 1, message };
            if found.is_some() {
                return Err(perr("only one state description is allowed".into()));
            }
            let mut fields = line.split_whitespace();
            let kind = fields.next().unwrap_or_default();
            let rest: Vec<&str> = fields.collect();
            let spec = match kind {
                "mixed" if rest.is_empty() => StateSpec::Mixed,
                "thermal" if rest.len() == 1 => {
                    let b: f64 = rest[0].parse().map_err(|_| perr(format!("invalid beta '{}'", rest[0])))?;
                    if !(b >= 0.0) || !b.is_finite() {
                        return Err(perr(format!("beta must be finite and nonnegative, got {b}")));
                    }
                    StateSpec::Thermal(b)
                }
                "basis" if rest.len() == 1 => {
                    StateSpec::Basis(rest[0].parse().map_err(|_| perr(format!("invalid index '{}'", rest[0])))?)
                }
                "pure" if !rest.is_empty() => {
                    let amps = rest
                        .iter()
                        .map(|tok| parse_amplitude(tok).ok_or_else(|| perr(format!("invalid amplitude '{tok}'"))))
                        .collect::<Result<Vec<_>>>()?;
                    StateSpec::Pure(amps)
                }
                other => return Err(perr(format!("unrecognized state line starting with '{other}'"))),
            };
            found = Some(spec);
        }
        found.ok_or(Error::Parse { line: 0, message: "empty state file".into() })
    }
}

fn parse_amplitude(tok: &str) -> Option<Complex<f64>> {
    match tok.split_once(',') {
        Some((re, im)) => Some(Complex::new(re.parse().ok()?, im.parse().ok()?)),
        None => Some(Complex::new(tok.parse().ok()?, 0.0)),
    }
}
