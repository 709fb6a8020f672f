//! Quantum state types and the operator-level primitives on them: tensor
//! products, partial trace, partial transpose and Uhlmann fidelity.
//!
//! Qubit ordering convention: qubit 0 is the most significant bit of the
//! computational-basis index, matching left-to-right tensor notation. The
//! basis labels `{0, 1}` stand for the polarization pair `{H, V}`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix, PSD_SLACK};

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Default cap on the total register size for dense simulation (4096x4096).
pub const DEFAULT_MAX_QUBITS: usize = 12;

/// Normalized pure state on a register of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} qubits need {} amplitudes, got {}",
                num_qubits,
                1usize << num_qubits,
                amps.len()
            )));
        }
        if !amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { num_qubits, amps })
    }

    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Self {
            num_qubits: n,
            amps,
        }
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= 1 << n {
            return Err(Error::InvalidQubit {
                index,
                num_qubits: n,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    pub(crate) fn trusted(num_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "inner product of {} vs {} qubits",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Density matrix `|psi><psi|`.
    pub fn outer(&self) -> DensityMatrix {
        let d = self.dim();
        let mat = ComplexMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj());
        DensityMatrix::trusted(self.num_qubits, mat)
    }

    /// `|self> (x) |other>`.
    pub fn tensor(&self, other: &Self) -> Self {
        let n = self.num_qubits + other.num_qubits;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self {
            num_qubits: n,
            amps,
        }
    }
}

/// Hermitian, unit-trace, PSD operator; the universal mixed-state
/// representation of this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity before accepting the
    /// operator. Eigenvalues in `[-1e-9, 0)` are tolerated as fp dust.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dim = mat.rows();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix dimension {} is not a power of two",
                dim
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        let dev = mat.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation: dev });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let min_eig = matrix::min_eigenvalue(&mat)?;
        if min_eig < -PSD_SLACK {
            return Err(Error::NotPositiveSemidefinite { min_eig });
        }
        Ok(Self { num_qubits, mat })
    }

    /// Constructor for operators that are valid by construction (unitary
    /// conjugation, partial traces, Kraus maps, tensor products).
    pub(crate) fn trusted(num_qubits: usize, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.rows(), 1 << num_qubits);
        debug_assert_eq!(mat.cols(), 1 << num_qubits);
        Self { num_qubits, mat }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1usize << n;
        let mat = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0));
        Self::trusted(n, mat)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += self.mat[(i, j)].norm_sqr();
            }
        }
        acc
    }

    /// Real part of `Tr(op rho)`; `op` must be Hermitian for this to be the
    /// physical expectation value.
    pub fn expectation_of(&self, op: &ComplexMatrix) -> Result<f64> {
        Ok(op.trace_product(&self.mat)?.re)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixWire {
    num_qubits: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let mut re = Vec::with_capacity(d);
        let mut im = Vec::with_capacity(d);
        for i in 0..d {
            re.push((0..d).map(|j| self.mat[(i, j)].re).collect());
            im.push((0..d).map(|j| self.mat[(i, j)].im).collect());
        }
        DensityMatrixWire {
            num_qubits: self.num_qubits,
            re,
            im,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let wire = DensityMatrixWire::deserialize(deserializer)?;
        let d = 1usize << wire.num_qubits;
        if wire.re.len() != d || wire.im.len() != d {
            return Err(D::Error::custom(format!(
                "expected {d} rows for {} qubits",
                wire.num_qubits
            )));
        }
        let mut data = Vec::with_capacity(d * d);
        for (re_row, im_row) in wire.re.iter().zip(&wire.im) {
            if re_row.len() != d || im_row.len() != d {
                return Err(D::Error::custom(format!("expected {d} columns per row")));
            }
            for (&re, &im) in re_row.iter().zip(im_row) {
                data.push(Complex64::new(re, im));
            }
        }
        let mat = ComplexMatrix::new(d, d, data).map_err(D::Error::custom)?;
        DensityMatrix::new(mat).map_err(D::Error::custom)
    }
}

/// Split of a register into two non-empty, disjoint parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    part_a: Vec<usize>,
    part_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(mut part_a: Vec<usize>, mut part_b: Vec<usize>) -> Result<Self> {
        part_a.sort_unstable();
        part_b.sort_unstable();
        if part_a.is_empty() || part_b.is_empty() {
            return Err(Error::InvalidBipartition(
                "both parts must be non-empty".into(),
            ));
        }
        if part_a.windows(2).any(|w| w[0] == w[1]) || part_b.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBipartition("duplicate qubit index".into()));
        }
        if part_a.iter().any(|q| part_b.binary_search(q).is_ok()) {
            return Err(Error::InvalidBipartition(
                "parts A and B must be disjoint".into(),
            ));
        }
        Ok(Self { part_a, part_b })
    }

    pub fn part_a(&self) -> &[usize] {
        &self.part_a
    }

    pub fn part_b(&self) -> &[usize] {
        &self.part_b
    }

    pub fn total_qubits(&self) -> usize {
        self.part_a.len() + self.part_b.len()
    }

    /// Checks that the parts cover `0..n` exactly once.
    pub fn validate_cover(&self, n: usize) -> Result<()> {
        if self.total_qubits() != n {
            return Err(Error::InvalidBipartition(format!(
                "parts cover {} qubits but the state has {}",
                self.total_qubits(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &q in self.part_a.iter().chain(&self.part_b) {
            if q >= n {
                return Err(Error::InvalidQubit {
                    index: q,
                    num_qubits: n,
                });
            }
            seen[q] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidBipartition(
                "parts do not cover every qubit".into(),
            ));
        }
        Ok(())
    }

    pub fn contains_in_a(&self, q: usize) -> bool {
        self.part_a.binary_search(&q).is_ok()
    }

    pub fn contains_in_b(&self, q: usize) -> bool {
        self.part_b.binary_search(&q).is_ok()
    }
}

/// `a (x) b` with the default register cap.
pub fn tensor_product(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    tensor_product_with_cap(a, b, DEFAULT_MAX_QUBITS)
}

/// `a (x) b`, rejecting registers larger than `max_qubits`.
pub fn tensor_product_with_cap(
    a: &DensityMatrix,
    b: &DensityMatrix,
    max_qubits: usize,
) -> Result<DensityMatrix> {
    let n = a.num_qubits() + b.num_qubits();
    if n > max_qubits {
        return Err(Error::DimensionCap {
            requested: n,
            cap: max_qubits,
        });
    }
    Ok(DensityMatrix::trusted(n, a.matrix().kron(b.matrix())))
}

/// Traces out `traced_qubits`, returning the state of the remaining register.
///
/// The kept qubits retain their relative order.
pub fn partial_trace(rho: &DensityMatrix, traced_qubits: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    let mut traced = traced_qubits.to_vec();
    traced.sort_unstable();
    traced.dedup();
    if traced.len() != traced_qubits.len() {
        return Err(Error::InvalidBipartition(
            "duplicate index in traced qubits".into(),
        ));
    }
    for &q in &traced {
        if q >= n {
            return Err(Error::InvalidQubit {
                index: q,
                num_qubits: n,
            });
        }
    }
    if traced.len() == n {
        return Err(Error::TraceAllQubits);
    }
    if traced.is_empty() {
        return Ok(rho.clone());
    }

    let kept: Vec<usize> = (0..n).filter(|q| traced.binary_search(q).is_err()).collect();
    let m = kept.len();
    let scatter = |positions: &[usize], value: usize| -> usize {
        let k = positions.len();
        let mut out = 0usize;
        for (bit, &q) in positions.iter().enumerate() {
            if value >> (k - 1 - bit) & 1 == 1 {
                out |= 1 << (n - 1 - q);
            }
        }
        out
    };
    let kept_idx: Vec<usize> = (0..1usize << m).map(|x| scatter(&kept, x)).collect();
    let traced_idx: Vec<usize> = (0..1usize << traced.len())
        .map(|z| scatter(&traced, z))
        .collect();

    let mut out = ComplexMatrix::zeros(1 << m, 1 << m);
    for (x, &bx) in kept_idx.iter().enumerate() {
        for (y, &by) in kept_idx.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &bz in &traced_idx {
                acc += rho.matrix()[(bx | bz, by | bz)];
            }
            out[(x, y)] = acc;
        }
    }
    Ok(DensityMatrix::trusted(m, out))
}

/// Transpose on subsystem B of the given bipartition.
///
/// The result is Hermitian with unit trace but in general not PSD, so it is
/// returned as a plain matrix rather than a `DensityMatrix`.
pub fn partial_transpose(rho: &DensityMatrix, cut: &Bipartition) -> Result<ComplexMatrix> {
    let n = rho.num_qubits();
    cut.validate_cover(n)?;
    let mut mask_b = 0usize;
    for &q in cut.part_b() {
        mask_b |= 1 << (n - 1 - q);
    }
    let mask_a = !mask_b & ((1 << n) - 1);
    let d = rho.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let src_i = (i & mask_a) | (j & mask_b);
            let src_j = (j & mask_a) | (i & mask_b);
            out[(i, j)] = rho.matrix()[(src_i, src_j)];
        }
    }
    Ok(out)
}

/// Uhlmann fidelity `F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
///
/// The squared convention makes `F` of two pure states equal `|<psi|phi>|^2`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != sigma.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {} vs {} qubits",
            rho.num_qubits(),
            sigma.num_qubits()
        )));
    }
    let root = matrix::matrix_sqrt_psd(rho.matrix())?;
    let inner = root.matmul(sigma.matrix())?.matmul(&root)?;
    let (vals, _) = matrix::eig_hermitian(&inner)?;
    let tr: f64 = vals.iter().map(|&v| v.max(0.0).sqrt()).sum();
    Ok((tr * tr).clamp(0.0, 1.0))
}

/// Trace distance `0.5 * ||rho - sigma||_1`; diagnostic helper.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != sigma.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance of {} vs {} qubits",
            rho.num_qubits(),
            sigma.num_qubits()
        )));
    }
    let diff = rho.matrix().sub(sigma.matrix())?;
    let (vals, _) = matrix::eig_hermitian(&diff)?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}
