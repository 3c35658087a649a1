//! Weighted Pauli strings and their dense matrices.
//!
//! A word like `"XZ"` acts with `X` on the most-significant qubit, matching the
//! Kronecker ordering used throughout the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix<T: Real>(self) -> ComplexMatrix<T> {
        let o = C::<T>::one();
        let z = C::<T>::zero();
        let i = Complex::new(T::zero(), T::one());
        let data = match self {
            Pauli::I => vec![o, z, z, o],
            Pauli::X => vec![z, o, o, z],
            Pauli::Y => vec![z, -i, i, z],
            Pauli::Z => vec![o, z, z, -o],
        };
        ComplexMatrix::new(2, 2, data).expect("2x2")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliWord(Vec<Pauli>);

impl PauliWord {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidPauli("empty word".into()));
        }
        Ok(Self(ops))
    }

    pub fn identity(qubits: usize) -> Self {
        Self(vec![Pauli::I; qubits.max(1)])
    }

    pub fn qubits(&self) -> usize {
        self.0.len()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    pub fn matrix<T: Real>(&self) -> ComplexMatrix<T> {
        let mut it = self.0.iter();
        let first = it.next().expect("nonempty").matrix();
        it.fold(first, |acc, p| acc.kron(&p.matrix()))
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|ch| {
                Pauli::from_char(ch)
                    .ok_or_else(|| Error::InvalidPauli(format!("unknown Pauli letter '{ch}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.as_char()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm<T> {
    pub coefficient: T,
    pub word: PauliWord,
}

impl<T: Real> PauliTerm<T> {
    pub fn new(coefficient: T, word: PauliWord) -> Result<Self> {
        if !coefficient.is_finite() || coefficient.is_zero() {
            return Err(Error::InvalidPauli(format!(
                "coefficient must be finite and nonzero, got {coefficient}"
            )));
        }
        Ok(Self { coefficient, word })
    }

    pub fn parse(coefficient: T, word: &str) -> Result<Self> {
        Self::new(coefficient, word.parse()?)
    }

    /// coefficient × (⊗ single-qubit Paulis).
    pub fn matrix(&self) -> ComplexMatrix<T> {
        self.word.matrix::<T>().scale_real(self.coefficient)
    }
}

/// A Hermitian operator Σ βᵢ Pᵢ with distinct words.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum<T> {
    terms: Vec<PauliTerm<T>>,
    qubits: usize,
}

impl<T: Real> PauliSum<T> {
    /// Merges duplicate words (summing coefficients) and drops terms that cancel.
    pub fn new(terms: Vec<PauliTerm<T>>) -> Result<Self> {
        let qubits = terms.first().ok_or(Error::EmptySum)?.word.qubits();
        let mut merged: BTreeMap<PauliWord, T> = BTreeMap::new();
        let mut order = Vec::new();
        for t in terms {
            if t.word.qubits() != qubits {
                return Err(Error::InvalidPauli(format!(
                    "word {} has {} qubits, expected {qubits}",
                    t.word,
                    t.word.qubits()
                )));
            }
            if !merged.contains_key(&t.word) {
                order.push(t.word.clone());
            }
            *merged.entry(t.word).or_insert_with(T::zero) += t.coefficient;
        }
        let terms: Vec<_> = order
            .into_iter()
            .filter_map(|w| {
                let c = merged[&w];
                (!c.is_zero()).then_some(PauliTerm { coefficient: c, word: w })
            })
            .collect();
        if terms.is_empty() {
            return Err(Error::EmptySum);
        }
        Ok(Self { terms, qubits })
    }

    /// Convenience constructor from `(coefficient, word)` pairs.
    pub fn from_pairs(pairs: &[(f64, &str)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|&(c, w)| PauliTerm::parse(T::lit(c), w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    pub fn identity(qubits: usize) -> Self {
        Self {
            terms: vec![PauliTerm { coefficient: T::one(), word: PauliWord::identity(qubits) }],
            qubits: qubits.max(1),
        }
    }

    pub fn terms(&self) -> &[PauliTerm<T>] {
        &self.terms
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// α = Σ |βᵢ|.
    pub fn scale(&self) -> T {
        self.terms.iter().fold(T::zero(), |a, t| a + t.coefficient.abs())
    }

    pub fn matrix(&self) -> ComplexMatrix<T> {
        let d = self.dim();
        self.terms
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, t| &acc + &t.matrix())
    }

    /// Parses the line format `<coefficient> <word>`; `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut qubits = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |message: String| Error::Parse { line: line_no, message };
            let mut fields = line.split_whitespace();
            let coef_s = fields.next().ok_or_else(|| perr("missing coefficient".into()))?;
            let word_s = fields.next().ok_or_else(|| perr("missing Pauli word".into()))?;
            if let Some(extra) = fields.next() {
                return Err(perr(format!("unexpected token '{extra}'")));
            }
            let coef: f64 = coef_s
                .parse()
                .map_err(|_| perr(format!("invalid coefficient '{coef_s}'")))?;
            let word: PauliWord = word_s.parse().map_err(|e: Error| perr(e.to_string()))?;
            match qubits {
                None => qubits = Some(word.qubits()),
                Some(q) if q != word.qubits() => {
                    return Err(perr(format!("word '{word_s}' has {} qubits, expected {q}", word.qubits())))
                }
                _ => {}
            }
            if coef == 0.0 {
                continue;
            }
            let term = PauliTerm::new(T::lit(coef), word).map_err(|e| perr(e.to_string()))?;
            terms.push(term);
        }
        Self::new(terms)
    }

    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|t| format!("{} {}\n", t.coefficient, t.word))
            .collect()
    }
}

impl<T: Real> FromStr for PauliSum<T> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

/// Matrix of a single term (alias kept for symmetry with [`pauli_sum_matrix`]).
pub fn pauli_term_matrix<T: Real>(term: &PauliTerm<T>) -> ComplexMatrix<T> {
    term.matrix()
}

pub fn pauli_sum_matrix<T: Real>(sum: &PauliSum<T>) -> ComplexMatrix<T> {
    sum.matrix()
}
