//! Pauli strings, weighted Pauli sums and the transverse-field Ising chain.
//!
//! Basis convention: qubit 0 (qubit 1 in physics notation) is the leftmost
//! tensor factor and therefore the most significant bit of a basis index.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VqeError};
use crate::scalar::Real;

/// Largest qubit count the dense routines (matrices and statevectors) accept.
pub const MAX_QUBITS: usize = 12;

/// Smallest chain length accepted for a TFIM or an ansatz.
pub const MIN_QUBITS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
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
}

/// Boundary condition of a 1-D chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Closed,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Closed => "closed",
        })
    }
}

impl std::str::FromStr for Boundary {
    type Err = VqeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(Boundary::Open),
            "closed" | "periodic" => Ok(Boundary::Closed),
            other => Err(VqeError::InvalidConfig(format!(
                "unknown boundary '{other}' (expected open or closed)"
            ))),
        }
    }
}

/// Nearest-neighbour pairs `(i, i+1)` of the chain; closed chains add `(n-1, 0)`.
pub fn coupling_pairs(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Closed && n >= 1 {
        pairs.push((n - 1, 0));
    }
    pairs
}

/// A real-weighted tensor product of single-qubit Paulis.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString<T> {
    coefficient: T,
    letters: Vec<Pauli>,
}

/// Bit-mask form of a Pauli string acting on basis indices.
///
/// `P|b> = phase(b) |b ^ flip>` with `phase(b) = i^y_count * (-1)^popcount(b & sign)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PauliMasks {
    pub flip: usize,
    pub sign: usize,
    pub y_count: u32,
}

impl PauliMasks {
    #[inline]
    pub fn phase<T: Real>(&self, basis: usize) -> Complex<T> {
        let negative = (basis & self.sign).count_ones() & 1 == 1;
        let unit = match self.y_count % 4 {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
        if negative {
            -unit
        } else {
            unit
        }
    }
}

impl<T: Real> PauliString<T> {
    pub fn new(coefficient: T, letters: Vec<Pauli>) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(VqeError::NonFinite("Pauli coefficient"));
        }
        if letters.is_empty() {
            return Err(VqeError::TooFewQubits { found: 0, min: 1 });
        }
        Ok(Self {
            coefficient,
            letters,
        })
    }

    /// Parses a label such as `"ZZI"`.
    pub fn from_label(coefficient: T, label: &str) -> Result<Self> {
        let letters = label
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| VqeError::InvalidConfig(format!("bad Pauli letter '{c}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coefficient, letters)
    }

    /// Identity everywhere except the listed `(qubit, letter)` sites.
    pub fn sparse(coefficient: T, n: usize, sites: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n];
        for &(q, p) in sites {
            if q >= n {
                return Err(VqeError::IndexOutOfRange { index: q, len: n });
            }
            letters[q] = p;
        }
        Self::new(coefficient, letters)
    }

    pub fn coefficient(&self) -> T {
        self.coefficient
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|p| p.as_char()).collect()
    }

    pub(crate) fn masks(&self) -> PauliMasks {
        let n = self.letters.len();
        let mut masks = PauliMasks {
            flip: 0,
            sign: 0,
            y_count: 0,
        };
        for (q, &p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => masks.flip |= bit,
                Pauli::Y => {
                    masks.flip |= bit;
                    masks.sign |= bit;
                    masks.y_count += 1;
                }
                Pauli::Z => masks.sign |= bit,
            }
        }
        masks
    }
}

impl<T: Real> fmt::Display for PauliString<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.coefficient, self.label())
    }
}

/// Hermitian operator written as a real combination of Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum<T> {
    n: usize,
    terms: Vec<PauliString<T>>,
}

impl<T: Real> PauliSum<T> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            terms: Vec::new(),
        }
    }

    /// Builds a sum from terms, dropping zero coefficients.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = PauliString<T>>) -> Result<Self> {
        let mut sum = Self::new(n);
        for t in terms {
            sum.push(t)?;
        }
        Ok(sum)
    }

    /// Appends a term. Zero-coefficient terms are silently dropped.
    pub fn push(&mut self, term: PauliString<T>) -> Result<()> {
        if term.num_qubits() != self.n {
            return Err(VqeError::DimensionMismatch {
                expected: self.n,
                found: term.num_qubits(),
            });
        }
        if term.coefficient != T::zero() {
            self.terms.push(term);
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliString<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies every coefficient by `factor` (a zero factor empties the sum).
    pub fn scaled(&self, factor: T) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|_| factor != T::zero())
            .map(|t| PauliString {
                coefficient: t.coefficient * factor,
                letters: t.letters.clone(),
            })
            .collect();
        Self { n: self.n, terms }
    }

    /// `O|psi>` for a raw amplitude vector of length `2^n`.
    pub fn apply(&self, amplitudes: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let dim = 1usize << self.n;
        if amplitudes.len() != dim {
            return Err(VqeError::DimensionMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let mut out = vec![Complex::new(T::zero(), T::zero()); dim];
        for term in &self.terms {
            let masks = term.masks();
            let c = term.coefficient;
            for (b, &a) in amplitudes.iter().enumerate() {
                out[b ^ masks.flip] += masks.phase::<T>(b) * a * c;
            }
        }
        Ok(out)
    }
}

/// Parameters of the transverse-field Ising chain
/// `H = -sum_{couplings} Z_i Z_{i+1} - h sum_i X_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TfimSpec<T> {
    n: usize,
    h: T,
    boundary: Boundary,
}

impl<T: Real> TfimSpec<T> {
    pub fn new(n: usize, h: T, boundary: Boundary) -> Result<Self> {
        if n < MIN_QUBITS {
            return Err(VqeError::TooFewQubits {
                found: n,
                min: MIN_QUBITS,
            });
        }
        if !h.is_finite() {
            return Err(VqeError::NonFinite("transverse field h"));
        }
        Ok(Self { n, h, boundary })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> T {
        self.h
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Number of ZZ coupling terms: `n - 1` open, `n` closed.
    pub fn coupling_count(&self) -> usize {
        match self.boundary {
            Boundary::Open => self.n - 1,
            Boundary::Closed => self.n,
        }
    }
}

pub fn build_tfim<T: Real>(spec: &TfimSpec<T>) -> PauliSum<T> {
    let n = spec.n;
    let mut sum = PauliSum::new(n);
    for (i, j) in coupling_pairs(n, spec.boundary) {
        let term = PauliString::sparse(-T::one(), n, &[(i, Pauli::Z), (j, Pauli::Z)])
            .expect("sites in range");
        sum.push(term).expect("matching qubit count");
    }
    for i in 0..n {
        let term = PauliString::sparse(-spec.h, n, &[(i, Pauli::X)]).expect("site in range");
        sum.push(term).expect("matching qubit count");
    }
    sum
}

/// Dense complex matrix stored row-major. Produced by [`to_dense`], which
/// guarantees it is Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self.get(i, i)).fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    /// `max |A - A^dagger|` over all entries.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `A v`.
    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        self.data
            .chunks(self.dim)
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    /// Eigenvalues in ascending order (full dense diagonalization).
    pub fn eigenvalues(&self) -> Vec<T> {
        T::hermitian_eigenvalues(self.dim, &self.data)
    }
}

fn check_dense_size(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(VqeError::TooManyQubits {
            found: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Materializes the operator as a `2^n x 2^n` matrix.
pub fn to_dense<T: Real>(op: &PauliSum<T>) -> Result<HermitianMatrix<T>> {
    check_dense_size(op.n)?;
    let dim = 1usize << op.n;
    let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for term in &op.terms {
        let masks = term.masks();
        for col in 0..dim {
            let row = col ^ masks.flip;
            data[row * dim + col] += masks.phase::<T>(col) * term.coefficient;
        }
    }
    Ok(HermitianMatrix { dim, data })
}

/// Smallest eigenvalue of an arbitrary Pauli sum by dense diagonalization.
pub fn ground_energy<T: Real>(op: &PauliSum<T>) -> Result<T> {
    let dense = to_dense(op)?;
    Ok(dense.eigenvalues()[0])
}

/// Exact ground-state energy `E_gs` of the TFIM chain.
pub fn exact_ground_energy<T: Real>(spec: &TfimSpec<T>) -> Result<T> {
    check_dense_size(spec.n)?;
    ground_energy(&build_tfim(spec))
}
