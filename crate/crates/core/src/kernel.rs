//! Positive-semidefinite Gram kernels and their finite sections.
//!
//! For a base-pointed family of dipoles `{v_x}` the kernel is
//! `M(x,y) = ⟨v_x, v_y⟩_E`, equal to the pointwise value `v_x(y)`. Closed
//! forms: `min(|x|, |y|)` on a common sign (0 across signs) for the
//! segment; the root-path overlap count for the tree. Closed forms are
//! exact integer computations and serve as oracles for the floating-point
//! energy route.

use std::collections::BTreeMap;
use std::sync::Arc;

use ndarray::Array2;
use serde_json::{json, Value};

use crate::dipole::solve_dipole;
use crate::eigen::{symmetric_eig, SpectralDecomposition};
use crate::energy::energy_inner;
use crate::error::{Error, Result};
use crate::family::{path_overlap, Family};
use crate::graph::{VertexId, WeightedGraph};
use crate::tol;

/// A symmetric kernel section `(M(x,y))_{x,y∈F}` with its row/column labels.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    labels: Vec<String>,
    entries: Array2<f64>,
}

impl KernelMatrix {
    /// Wraps raw entries; rejects non-square data, label mismatch, and any
    /// exact asymmetry.
    pub fn new(labels: Vec<String>, entries: Array2<f64>) -> Result<Self> {
        let n = labels.len();
        if entries.dim() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "{} labels vs {}x{} entries",
                n,
                entries.nrows(),
                entries.ncols()
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if entries[[i, j]] != entries[[j, i]] {
                    return Err(Error::Asymmetric(
                        (entries[[i, j]] - entries[[j, i]]).abs(),
                    ));
                }
            }
        }
        Ok(KernelMatrix { labels, entries })
    }

    /// Builds from the upper triangle of `f`, mirroring so symmetry is
    /// exact by construction.
    pub fn from_upper<F: FnMut(usize, usize) -> f64>(labels: Vec<String>, mut f: F) -> Self {
        let n = labels.len();
        let mut entries = Array2::zeros((n, n));
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                entries[[i, j]] = v;
                entries[[j, i]] = v;
            }
        }
        KernelMatrix { labels, entries }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[[i, j]]
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::LabelOutsideIndex(label.to_string()))
    }

    /// The principal submatrix on a subset of labels (given by positions).
    pub fn section(&self, keep: &[usize]) -> Result<KernelMatrix> {
        for &i in keep {
            if i >= self.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "index {i} out of range {}",
                    self.dim()
                )));
            }
        }
        let labels: Vec<String> = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let mut entries = Array2::zeros((keep.len(), keep.len()));
        for (r, &i) in keep.iter().enumerate() {
            for (c, &j) in keep.iter().enumerate() {
                entries[[r, c]] = self.entries[[i, j]];
            }
        }
        Ok(KernelMatrix { labels, entries })
    }

    /// JSON form `{"labels": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<f64>> = self
            .entries
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect();
        json!({ "labels": self.labels, "rows": rows })
    }
}

/// A finite coefficient vector `c`, representing `f_c(·) = Σ_x c_x M(·,x)`.
#[derive(Clone, Debug, Default)]
pub struct KernelVector {
    coeffs: BTreeMap<String, f64>,
}

impl KernelVector {
    pub fn from_pairs(pairs: &[(&str, f64)]) -> Self {
        let mut coeffs = BTreeMap::new();
        for (label, c) in pairs {
            *coeffs.entry(label.to_string()).or_insert(0.0) += c;
        }
        KernelVector { coeffs }
    }

    /// The coefficient vector of a single kernel column `v_x`.
    pub fn dirac(label: &str) -> Self {
        Self::from_pairs(&[(label, 1.0)])
    }

    pub fn coeffs(&self) -> &BTreeMap<String, f64> {
        &self.coeffs
    }

    /// Evaluates `f_c(x) = Σ_y c_y M(x,y)`.
    pub fn evaluate(&self, m: &KernelMatrix, at: &str) -> Result<f64> {
        let i = m.position(at)?;
        let mut acc = 0.0;
        for (label, c) in &self.coeffs {
            acc += c * m.get(i, m.position(label)?);
        }
        Ok(acc)
    }
}

/// The bilinear pairing `⟨f_a, f_b⟩ = Σ_{x,y} a_x M(x,y) b_y`.
pub fn kernel_vector_inner(a: &KernelVector, b: &KernelVector, m: &KernelMatrix) -> Result<f64> {
    let mut acc = 0.0;
    for (la, ca) in &a.coeffs {
        let i = m.position(la)?;
        for (lb, cb) in &b.coeffs {
            acc += ca * cb * m.get(i, m.position(lb)?);
        }
    }
    Ok(acc)
}

/// The Gram section `M(x,y) = ⟨v_x, v_y⟩_E` over `F`, with each dipole
/// `v_x` solved against the base point. Equals `v_x(y)` pointwise.
pub fn gram_from_energy(
    g: &Arc<WeightedGraph>,
    section: &[VertexId],
    base: &VertexId,
) -> Result<KernelMatrix> {
    validate_section(section, base)?;
    let mut dipoles = Vec::with_capacity(section.len());
    for x in section {
        dipoles.push(solve_dipole(g, x, base)?);
    }
    let mut out = Array2::zeros((section.len(), section.len()));
    for i in 0..section.len() {
        for j in i..section.len() {
            let v = energy_inner(&dipoles[i], &dipoles[j])?;
            out[[i, j]] = v;
            out[[j, i]] = v;
        }
    }
    KernelMatrix::new(section.iter().map(|v| v.to_string()).collect(), out)
}

fn validate_section(section: &[VertexId], base: &VertexId) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for x in section {
        if x == base {
            return Err(Error::BaseInSection(base.to_string()));
        }
        if !seen.insert(x) {
            return Err(Error::DuplicateVertex(x.to_string()));
        }
    }
    Ok(())
}

/// The exact closed-form Gram section for a family. Entries are integers.
pub fn gram_closed_form(family: Family, section: &[VertexId]) -> Result<KernelMatrix> {
    let base = family.base();
    validate_section(section, &base)?;
    match family {
        Family::Segment => {
            let ints: Vec<i64> = section
                .iter()
                .map(|v| v.as_integer())
                .collect::<Result<_>>()?;
            Ok(KernelMatrix::from_upper(
                section.iter().map(|v| v.to_string()).collect(),
                |i, j| {
                    let (a, b) = (ints[i], ints[j]);
                    if a.signum() == b.signum() {
                        a.abs().min(b.abs()) as f64
                    } else {
                        0.0
                    }
                },
            ))
        }
        Family::Tree => {
            let words: Vec<String> = section
                .iter()
                .map(|v| v.as_word().map(str::to_string))
                .collect::<Result<_>>()?;
            Ok(KernelMatrix::from_upper(
                section.iter().map(|v| v.to_string()).collect(),
                |i, j| path_overlap(&words[i], &words[j]) as f64,
            ))
        }
    }
}

/// Default cap on the level-kernel recursion depth; the matrix at `k`
/// has dimension `2^k`.
pub const TREE_RECURSION_MAX: usize = 12;

/// The level-`k` tree kernel built by the block recursion
/// `M_1 = I_2`, `M_{k+1} = diag(τ(M_k), τ(M_k))` where `τ` adds 1 to every
/// entry. Index: words of length `k`, lexicographically.
pub fn tree_level_recursion(k: usize) -> Result<KernelMatrix> {
    if k < 1 || k > TREE_RECURSION_MAX {
        return Err(Error::SizeOutOfRange {
            what: "level recursion depth",
            min: 1,
            got: k as i64,
        });
    }
    let mut m = Array2::eye(2);
    for _ in 1..k {
        let n = m.nrows();
        let mut next = Array2::zeros((2 * n, 2 * n));
        for i in 0..n {
            for j in 0..n {
                let bumped = m[[i, j]] + 1.0;
                next[[i, j]] = bumped;
                next[[n + i, n + j]] = bumped;
            }
        }
        m = next;
    }
    let labels = crate::family::level_words(k)
        .iter()
        .map(|v| v.to_string())
        .collect();
    KernelMatrix::new(labels, m)
}

/// Positive-semidefiniteness check: `(is_psd, min eigenvalue)` with the
/// slack `min λ ≥ −tol · max(1, max λ)`.
pub fn psd_check(m: &KernelMatrix) -> Result<(bool, f64)> {
    psd_check_with_tol(m, tol::PSD_REL)
}

pub fn psd_check_with_tol(m: &KernelMatrix, tolerance: f64) -> Result<(bool, f64)> {
    let d = symmetric_eig(m.entries())?;
    let min = d.min_eigenvalue();
    let scale = d.max_eigenvalue().max(1.0);
    Ok((min >= -tolerance * scale, min))
}

/// Factors a PSD section as Gram of coordinate vectors: `w_x` is row `x`
/// of `Ξ diag(√λ)`, with eigenvalues below the null tolerance clamped to
/// zero. The Gram of the returned vectors reproduces the input entrywise
/// to [`tol::FACTORIZATION_ROUNDTRIP`].
pub fn gram_factorization(m: &KernelMatrix) -> Result<Vec<Vec<f64>>> {
    let d = symmetric_eig(m.entries())?;
    let scale = d.max_eigenvalue().max(1.0);
    let clamp = tol::NULL_CLAMP_REL * scale;
    if d.min_eigenvalue() < -clamp {
        return Err(Error::NotPositiveSemidefinite(d.min_eigenvalue()));
    }
    let n = m.dim();
    let roots: Vec<f64> = d
        .eigenvalues
        .iter()
        .map(|&l| if l <= clamp { 0.0 } else { l.sqrt() })
        .collect();
    let mut out = vec![vec![0.0; n]; n];
    for (x, row) in out.iter_mut().enumerate() {
        for k in 0..n {
            row[k] = d.eigenvectors[[x, k]] * roots[k];
        }
    }
    Ok(out)
}

/// Point-sampled sections of the kernel `M(x,y) = 1/(1−xy)` on `[0,1)`.
pub fn szego_gram(points: &[f64]) -> Result<KernelMatrix> {
    for &p in points {
        if !(0.0..1.0).contains(&p) || !p.is_finite() {
            return Err(Error::InvalidSamplePoint(p));
        }
    }
    for (i, &p) in points.iter().enumerate() {
        if points[i + 1..].contains(&p) {
            return Err(Error::DuplicateSamplePoint(p));
        }
    }
    let labels = points.iter().map(|p| format!("{p}")).collect();
    Ok(KernelMatrix::from_upper(labels, |i, j| {
        1.0 / (1.0 - points[i] * points[j])
    }))
}

/// The conductance matrix of a graph: `μ(x)` on the diagonal, `−μ_xy` for
/// edges, 0 otherwise. Always positive semidefinite.
pub fn conductance_matrix(g: &WeightedGraph) -> KernelMatrix {
    let n = g.vertex_count();
    let labels = g.vertices().iter().map(|v| v.to_string()).collect();
    let mut entries = Array2::zeros((n, n));
    for i in 0..n {
        entries[[i, i]] = g.mu_total_at(i);
        for &(j, w) in g.neighbors(i) {
            entries[[i, j]] = -w;
        }
    }
    KernelMatrix { labels, entries }
}

/// Convenience: eigendecomposition of a kernel section.
pub fn kernel_spectrum(m: &KernelMatrix) -> Result<SpectralDecomposition> {
    symmetric_eig(m.entries())
}
