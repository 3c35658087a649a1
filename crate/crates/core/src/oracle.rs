//! Brute-force spectral ground truth for every estimand.

use crate::cheb::ChebyshevPoly;
use crate::error::{Error, Result};
use crate::linalg::{inner, spectral_compose, ComplexMatrix};
use crate::pauli::PauliSum;
use crate::scalar::{cr, Real, C};

/// Tr(ρ · Πᵢ e^{iHtᵢ} Oᵢ e^{−iHtᵢ}).
pub fn oracle_correlation<T: Real>(
    h: &PauliSum<T>,
    observables: &[(PauliSum<T>, T)],
    rho: &ComplexMatrix<T>,
) -> Result<C<T>> {
    let hm = h.matrix();
    let mut prod = ComplexMatrix::identity(hm.rows());
    for (o, t) in observables {
        let fwd = hm.expm_i_hermitian(*t)?;
        let back = fwd.adjoint();
        prod = prod.matmul(&fwd.matmul(&o.matrix()).matmul(&back));
    }
    Ok(rho.matmul(&prod).trace())
}

/// Σ over eigenvalues in the closed interval [a, b] of ⟨ψᵢ|A|ψᵢ⟩, with A = I/D
/// when no weight operator is given.
pub fn oracle_dos_integral<T: Real>(h: &PauliSum<T>, a: T, b: T, weight: Option<&ComplexMatrix<T>>) -> Result<T> {
    if !(a < b) {
        return Err(Error::BadInterval(format!("need a < b, got [{a}, {b}]")));
    }
    let (vals, weights) = spectral_weights(h, weight)?;
    Ok(vals
        .iter()
        .zip(&weights)
        .filter(|(&e, _)| e >= a && e <= b)
        .fold(T::zero(), |s, (_, &w)| s + w))
}

/// [Σᵢ T_n(Eᵢ/α)·⟨ψᵢ|A|ψᵢ⟩ for n = 0..=N].
pub fn oracle_moments<T: Real>(h: &PauliSum<T>, alpha: T, n_max: usize, weight: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let (vals, weights) = spectral_weights(h, Some(weight))?;
    let xs = scaled_spectrum(&vals, alpha)?;
    Ok((0..=n_max)
        .map(|n| {
            let tn = ChebyshevPoly::<T>::basis(n);
            xs.iter().zip(&weights).fold(T::zero(), |s, (&x, &w)| s + tn.eval(x) * w)
        })
        .collect())
}

/// Sharp spectral function applied in [`oracle_response`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResponseQuery<T> {
    Integral { a: T, b: T },
    Moment { n: usize, alpha: T },
}

/// Σᵢ Tr(ρ B|ψᵢ⟩⟨ψᵢ|C)·f(Eᵢ) with f the indicator of [a, b] or T_n(·/α).
pub fn oracle_response<T: Real>(
    h: &PauliSum<T>,
    b: &PauliSum<T>,
    c: &PauliSum<T>,
    rho: &ComplexMatrix<T>,
    query: ResponseQuery<T>,
) -> Result<C<T>> {
    let (vals, vecs) = h.matrix().eig_hermitian()?;
    let filtered = match query {
        ResponseQuery::Integral { a, b } => {
            if !(a < b) {
                return Err(Error::BadInterval(format!("need a < b, got [{a}, {b}]")));
            }
            spectral_compose(&vals, &vecs, |e| cr(if e >= a && e <= b { T::one() } else { T::zero() }))
        }
        ResponseQuery::Moment { n, alpha } => {
            scaled_spectrum(&vals, alpha)?;
            let tn = ChebyshevPoly::<T>::basis(n);
            spectral_compose(&vals, &vecs, |e| cr(tn.eval((e / alpha).max(-T::one()).min(T::one()))))
        }
    };
    Ok(rho.matmul(&b.matrix()).matmul(&filtered).matmul(&c.matrix()).trace())
}

fn spectral_weights<T: Real>(h: &PauliSum<T>, weight: Option<&ComplexMatrix<T>>) -> Result<(Vec<T>, Vec<T>)> {
    let (vals, vecs) = h.matrix().eig_hermitian()?;
    let d = vals.len();
    let weights = match weight {
        None => vec![T::one() / T::from_usize_lossy(d); d],
        Some(a) => {
            if a.rows() != d || !a.is_square() {
                return Err(Error::DimensionMismatch(format!("weight operator must be {d}x{d}")));
            }
            (0..d)
                .map(|i| {
                    let v = vecs.column(i);
                    inner(&v, &a.matvec(&v)).re
                })
                .collect()
        }
    };
    Ok((vals, weights))
}

fn scaled_spectrum<T: Real>(vals: &[T], alpha: T) -> Result<Vec<T>> {
    let norm = vals.iter().fold(T::zero(), |m, &e| m.max(e.abs()));
    if !(alpha > T::zero()) || norm / alpha > T::one() + T::lit(1e-12) {
        return Err(Error::ScaleTooSmall { ratio: (norm / alpha).to_f64_lossy() });
    }
    Ok(vals.iter().map(|&e| (e / alpha).max(-T::one()).min(T::one())).collect())
}

/// |r⟩⟨r| as a weight operator for local densities of states.
pub fn site_weight<T: Real>(site: &[C<T>]) -> ComplexMatrix<T> {
    ComplexMatrix::outer(site, site)
}

/// I/D.
pub fn uniform_weight<T: Real>(d: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(d).scale_real(T::one() / T::from_usize_lossy(d))
}
