//! Finite truncations of the Laplacian on the dipole span.
//!
//! For a finite base-free section `F`, the kernel eigenpairs
//! `M_F ξ_λ = λ ξ_λ` produce the orthonormal basis
//! `u_λ = λ^{-1/2} Σ_{x∈F} ξ_λ(x) v_x` of the span `ℋ(F)`. In that basis
//! the compressed Laplacian `P_F Δ P_F` is the diagonal of inverse
//! eigenvalues plus the rank-one term `|P_F δ_0⟩⟨P_F δ_0|`, whose
//! coefficients are `−λ^{-1/2} ⟨ξ_λ, χ_F⟩`. Sweeping these quantities over
//! an exhaustion yields finite evidence for the spectral gap (boundedness
//! of `Δ`), for the growth of `max Λ_F` (absence of a bounded inverse),
//! and for membership of Dirac masses in the kernel space.

use std::sync::Arc;

use ndarray::Array2;

use crate::dipole::solve_dipole;
use crate::eigen::{symmetric_eig, SpectralDecomposition};
use crate::energy::{energy_inner, EnergyVector};
use crate::error::{Error, Result};
use crate::family::{ExhaustionRule, Family};
use crate::graph::{VertexId, WeightedGraph};
use crate::kernel::{gram_closed_form, gram_from_energy, KernelMatrix};
use crate::tol;

/// Diagonalization data of one finite section `F`.
///
/// Null directions of `M_F` (eigenvalues at or below the clamp tolerance)
/// represent the zero vector of the kernel space; they are excluded from
/// the basis and counted in `dropped_null`.
#[derive(Clone, Debug)]
pub struct TruncationData {
    gram: KernelMatrix,
    spectral: SpectralDecomposition,
    /// Indices into `spectral` of the eigenpairs kept, ascending.
    kept: Vec<usize>,
    dropped_null: usize,
    /// `c_λ = −λ^{-1/2} ⟨ξ_λ, χ_F⟩`, per kept eigenvalue.
    proj_delta_coeffs: Vec<f64>,
    proj_delta_normsq: f64,
}

impl TruncationData {
    pub fn gram(&self) -> &KernelMatrix {
        &self.gram
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    /// Kept eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.kept
            .iter()
            .map(|&i| self.spectral.eigenvalues[i])
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    pub fn dropped_null(&self) -> usize {
        self.dropped_null
    }

    pub fn min_lambda(&self) -> f64 {
        self.spectral.eigenvalues[self.kept[0]]
    }

    pub fn max_lambda(&self) -> f64 {
        self.spectral.eigenvalues[*self.kept.last().expect("nonempty")]
    }

    /// Inverse kept eigenvalues, indexed like [`Self::eigenvalues`].
    pub fn d_inv(&self) -> Vec<f64> {
        self.kept
            .iter()
            .map(|&i| 1.0 / self.spectral.eigenvalues[i])
            .collect()
    }

    fn xi(&self, x: usize, k: usize) -> f64 {
        self.spectral.vector_entry(x, self.kept[k])
    }

    /// Coefficients of `u_λ` in the dipole frame: column `k` holds
    /// `λ_k^{-1/2} ξ_k` over `F`.
    pub fn onb_coefficients(&self) -> Array2<f64> {
        let n = self.gram.dim();
        let lambdas = self.eigenvalues();
        let mut out = Array2::zeros((n, self.rank()));
        for k in 0..self.rank() {
            let scale = 1.0 / lambdas[k].sqrt();
            for x in 0..n {
                out[[x, k]] = scale * self.xi(x, k);
            }
        }
        out
    }

    /// Max deviation of the `{u_λ}` Gram (computed through `M_F`) from the
    /// identity.
    pub fn onb_gram_defect(&self) -> f64 {
        let n = self.gram.dim();
        let r = self.rank();
        let lambdas = self.eigenvalues();
        let m = self.gram.entries();
        let mut worst: f64 = 0.0;
        for i in 0..r {
            for j in i..r {
                let mut acc = 0.0;
                for x in 0..n {
                    let mut mx = 0.0;
                    for y in 0..n {
                        mx += m[[x, y]] * self.xi(y, j);
                    }
                    acc += self.xi(x, i) * mx;
                }
                acc /= (lambdas[i] * lambdas[j]).sqrt();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }

    /// Coefficients of `v_x` in the `u_λ` basis: `√λ ξ_λ(x)`.
    pub fn reconstruct_dipole(&self, label: &str) -> Result<Vec<f64>> {
        let x = self.gram.position(label)?;
        let lambdas = self.eigenvalues();
        Ok((0..self.rank())
            .map(|k| lambdas[k].sqrt() * self.xi(x, k))
            .collect())
    }

    /// Max error, over the section, of the reconstruction of `v_x` paired
    /// back against every dipole: `Σ_λ λ ξ_λ(x) ξ_λ(y)` versus `M(y,x)`.
    pub fn reconstruction_defect(&self, label: &str) -> Result<f64> {
        let x = self.gram.position(label)?;
        let lambdas = self.eigenvalues();
        let mut worst: f64 = 0.0;
        for y in 0..self.gram.dim() {
            let mut acc = 0.0;
            for k in 0..self.rank() {
                acc += lambdas[k] * self.xi(x, k) * self.xi(y, k);
            }
            worst = worst.max((acc - self.gram.get(y, x)).abs());
        }
        Ok(worst)
    }

    /// Coefficients of `P_F δ_0` in the `u_λ` basis and its squared norm.
    pub fn project_delta(&self) -> (&[f64], f64) {
        (&self.proj_delta_coeffs, self.proj_delta_normsq)
    }

    /// The compressed Laplacian in the `u_λ` basis:
    /// `T[λ,λ'] = (⟨ξ_λ, ξ_λ'⟩ + ⟨ξ_λ, χ⟩⟨χ, ξ_λ'⟩) / √(λλ')`.
    pub fn truncated_laplacian(&self) -> Array2<f64> {
        let n = self.gram.dim();
        let r = self.rank();
        let lambdas = self.eigenvalues();
        let sums: Vec<f64> = (0..r).map(|k| (0..n).map(|x| self.xi(x, k)).sum()).collect();
        let mut t = Array2::zeros((r, r));
        for i in 0..r {
            for j in 0..r {
                let mut dot = 0.0;
                for x in 0..n {
                    dot += self.xi(x, i) * self.xi(x, j);
                }
                t[[i, j]] = (dot + sums[i] * sums[j]) / (lambdas[i] * lambdas[j]).sqrt();
            }
        }
        t
    }

    /// Max entrywise difference between the compressed Laplacian and its
    /// rank-one form `diag(λ^{-1}) + c c^T`.
    pub fn rank1_residual(&self) -> f64 {
        let t = self.truncated_laplacian();
        let d = self.d_inv();
        let c = &self.proj_delta_coeffs;
        let mut worst: f64 = 0.0;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let model = if i == j { d[i] } else { 0.0 } + c[i] * c[j];
                worst = worst.max((t[[i, j]] - model).abs());
            }
        }
        worst
    }
}

/// Builds truncation data from any kernel section.
pub fn build_truncation_from_gram(gram: KernelMatrix) -> Result<TruncationData> {
    if gram.dim() == 0 {
        return Err(Error::AllZeroGram);
    }
    let spectral = symmetric_eig(gram.entries())?;
    let scale = spectral.max_eigenvalue().max(1.0);
    let clamp = tol::NULL_CLAMP_REL * scale;
    if spectral.min_eigenvalue() < -clamp {
        return Err(Error::NotPositiveSemidefinite(spectral.min_eigenvalue()));
    }
    let kept: Vec<usize> = (0..spectral.dim())
        .filter(|&i| spectral.eigenvalues[i] > clamp)
        .collect();
    if kept.is_empty() {
        return Err(Error::AllZeroGram);
    }
    let dropped_null = spectral.dim() - kept.len();
    let n = gram.dim();
    let mut coeffs = Vec::with_capacity(kept.len());
    let mut normsq = 0.0;
    for &ki in &kept {
        let lambda = spectral.eigenvalues[ki];
        let sum: f64 = (0..n).map(|x| spectral.vector_entry(x, ki)).sum();
        let c = -sum / lambda.sqrt();
        normsq += c * c;
        coeffs.push(c);
    }
    Ok(TruncationData {
        gram,
        spectral,
        kept,
        dropped_null,
        proj_delta_coeffs: coeffs,
        proj_delta_normsq: normsq,
    })
}

/// Builds truncation data for a vertex section of a graph, with the kernel
/// computed through the energy inner product.
pub fn build_truncation(
    g: &Arc<WeightedGraph>,
    section: &[VertexId],
    base: &VertexId,
) -> Result<TruncationData> {
    build_truncation_from_gram(gram_from_energy(g, section, base)?)
}

/// The compressed Laplacian computed independently through energy inner
/// products: each `u_λ` is realized as an energy vector and paired with
/// the pointwise Laplacian of the others. Cross-validates
/// [`TruncationData::truncated_laplacian`].
pub fn truncated_laplacian_energy(
    g: &Arc<WeightedGraph>,
    base: &VertexId,
    t: &TruncationData,
) -> Result<Array2<f64>> {
    let labels = t.gram().labels();
    let mut dipoles = Vec::with_capacity(labels.len());
    for label in labels {
        dipoles.push(solve_dipole(g, &VertexId::new(label), base)?);
    }
    let coeffs = t.onb_coefficients();
    let r = t.rank();
    let mut basis = Vec::with_capacity(r);
    for k in 0..r {
        let terms: Vec<(f64, &EnergyVector)> = dipoles
            .iter()
            .enumerate()
            .map(|(x, v)| (coeffs[[x, k]], v))
            .collect();
        basis.push(EnergyVector::linear_combination(&terms)?);
    }
    let mut out = Array2::zeros((r, r));
    for j in 0..r {
        let image = EnergyVector::pinned(g.clone(), base, basis[j].laplacian_vector())?;
        for (i, u) in basis.iter().enumerate() {
            out[[i, j]] = energy_inner(u, &image)?;
        }
    }
    Ok(out)
}

/// One row of a spectral-gap sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub k: usize,
    pub n_f: usize,
    pub min_lambda: f64,
    pub max_lambda: f64,
    /// Running infimum of `min Λ_{F_j}`, `j ≤ k` — the gap estimate.
    pub gap_est: f64,
    /// Running supremum of `max Λ_{F_j}`, `j ≤ k`.
    pub sigma_est: f64,
    pub proj_delta_normsq: f64,
    /// A-priori operator-norm bound `gap_est^{-1} + ‖P_{F_k} δ_0‖²`.
    pub norm_bound: f64,
}

/// Gap/boundedness diagnostics over an exhaustion sequence.
///
/// The gap and sigma columns are running extremes over the sweep — finite
/// estimates, not proven limits, since the true infimum ranges over all
/// finite sets.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub family: Family,
    pub rule: ExhaustionRule,
    pub rows: Vec<SweepRow>,
    /// `max Λ_{F_k}` grew strictly through the whole sweep: finite
    /// evidence that `Δ` has no bounded inverse.
    pub no_bounded_inverse_evidence: bool,
    pub warnings: Vec<String>,
}

/// Sweeps the exhaustion `F_1, …, F_K`, reporting eigenvalue extremes, the
/// projected-delta norm, and the a-priori norm bound per index.
///
/// For nested rules the per-index extremes must themselves be monotone
/// (interlacing of nested principal sections); a violation beyond
/// [`tol::INTERLACING_SLACK`] is a contract error.
pub fn gap_sweep(family: Family, rule: ExhaustionRule, k_max: usize) -> Result<SweepReport> {
    if k_max < 1 {
        return Err(Error::SizeOutOfRange {
            what: "sweep length",
            min: 1,
            got: k_max as i64,
        });
    }
    let mut rows: Vec<SweepRow> = Vec::with_capacity(k_max);
    let mut warnings = Vec::new();
    let mut strictly_increasing = true;
    for k in 1..=k_max {
        let section = family.exhaustion(rule, k)?;
        let t = build_truncation_from_gram(gram_closed_form(family, &section)?)?;
        if t.dropped_null() > 0 {
            warnings.push(format!("k={k}: {} null directions clamped", t.dropped_null()));
        }
        let (min_l, max_l) = (t.min_lambda(), t.max_lambda());
        let (gap_est, sigma_est) = match rows.last() {
            Some(prev) => (prev.gap_est.min(min_l), prev.sigma_est.max(max_l)),
            None => (min_l, max_l),
        };
        if let Some(prev) = rows.last() {
            if max_l <= prev.sigma_est {
                strictly_increasing = false;
            }
            if rule.is_nested(family) {
                let min_jump = min_l - prev.min_lambda;
                let max_drop = prev.max_lambda - max_l;
                if min_jump > tol::INTERLACING_SLACK || max_drop > tol::INTERLACING_SLACK {
                    return Err(Error::ContractViolation {
                        what: format!("nested eigenvalue-extreme monotonicity at k={k}"),
                        value: min_jump.max(max_drop),
                        tolerance: tol::INTERLACING_SLACK,
                    });
                }
            }
        }
        let (_, normsq) = t.project_delta();
        rows.push(SweepRow {
            k,
            n_f: section.len(),
            min_lambda: min_l,
            max_lambda: max_l,
            gap_est,
            sigma_est,
            proj_delta_normsq: normsq,
            norm_bound: 1.0 / gap_est + normsq,
        });
    }
    Ok(SweepReport {
        family,
        rule,
        rows,
        no_bounded_inverse_evidence: strictly_increasing && k_max > 1,
        warnings,
    })
}

/// One row of the Dirac-membership criterion sweep.
#[derive(Clone, Debug)]
pub struct SymmetryRow {
    pub k: usize,
    pub n_f: usize,
    /// `s_k = Σ_λ |ξ_λ(x)|² / λ = ‖P_{F_k} δ_x‖²`; 0 while `x ∉ F_k`.
    pub s_k: f64,
}

/// Membership diagnostic for `δ_x` in the kernel space.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub family: Family,
    pub rule: ExhaustionRule,
    pub x: VertexId,
    /// The Bessel bound `‖δ_x‖² = μ(x)` of the infinite graph.
    pub mu_x: f64,
    pub rows: Vec<SymmetryRow>,
}

/// The sequence `s_k = Σ_{λ∈Λ_{F_k}} |ξ_λ(x)|²/λ` over a nested exhaustion.
///
/// Nondecreasing in `k`, and bounded by `μ(x)` exactly when `δ_x` belongs
/// to the kernel space; its supremum estimate is the membership
/// diagnostic. Requires a nested rule.
pub fn symmetry_criterion(
    family: Family,
    x: &VertexId,
    rule: ExhaustionRule,
    k_max: usize,
) -> Result<SymmetryReport> {
    if !rule.is_nested(family) {
        return Err(Error::NonNestedRule(rule.name()));
    }
    if *x == family.base() {
        return Err(Error::BaseInSection(x.to_string()));
    }
    if !family.contains(x) {
        return Err(Error::NotInFamily(x.to_string()));
    }
    let mut sections = Vec::with_capacity(k_max);
    let mut sizes = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let f = family.exhaustion(rule, k)?;
        sizes.push(f.len());
        sections.push(gram_closed_form(family, &f)?);
    }
    let values = symmetry_criterion_kernel(&sections, x.as_str())?;
    let rows = values
        .iter()
        .enumerate()
        .map(|(i, &s_k)| SymmetryRow {
            k: i + 1,
            n_f: sizes[i],
            s_k,
        })
        .collect();
    Ok(SymmetryReport {
        family,
        rule,
        x: x.clone(),
        mu_x: family.mu_infinite(x)?,
        rows,
    })
}

/// Kernel-level form of [`symmetry_criterion`], for arbitrary nested
/// section sequences (point-sampled kernels included). Sections must be
/// nested for the monotonicity contract to apply; entries where the label
/// is absent contribute 0.
pub fn symmetry_criterion_kernel(sections: &[KernelMatrix], label: &str) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(sections.len());
    for m in sections {
        let Ok(x) = m.position(label) else {
            out.push(0.0);
            continue;
        };
        let t = build_truncation_from_gram(m.clone())?;
        let lambdas = t.eigenvalues();
        let s: f64 = (0..t.rank())
            .map(|k| {
                let e = t.xi(x, k);
                e * e / lambdas[k]
            })
            .sum();
        out.push(s);
    }
    for w in out.windows(2) {
        if w[0] > w[1] + tol::INTERLACING_SLACK {
            return Err(Error::ContractViolation {
                what: "membership sequence monotonicity".to_string(),
                value: w[0] - w[1],
                tolerance: tol::INTERLACING_SLACK,
            });
        }
    }
    Ok(out)
}

/// One row of the diagonal-limit diagnostic.
#[derive(Clone, Debug)]
pub struct DiagonalLimitRow {
    pub k: usize,
    pub n_f: usize,
    pub residual: f64,
}

/// Residuals of the diagonal operator against its limit form.
///
/// The finite-section identity writes `D_F` as the compressed Laplacian
/// minus the rank-one term `|P_F δ_0⟩⟨P_F δ_0|`, which pins a minus sign
/// in the limit. Each row reports
/// `r_k = ⟨v_x, D_{F_k} v_y⟩ − (⟨v_x, Δ v_y⟩ − ⟨v_x, δ_0⟩⟨δ_0, v_y⟩)`
/// with `D` applied via `T − c c^T`; the Laplacian pairings use the exact
/// base-pointed values `⟨v_x, Δ v_y⟩ = δ_{x,y} + 1` and `⟨v_x, δ_0⟩ = −1`.
/// In exact arithmetic every residual vanishes, so the sequence measures
/// accumulated floating-point error only.
pub fn diagonal_limit_sweep(
    family: Family,
    x: &VertexId,
    y: &VertexId,
    rule: ExhaustionRule,
    k_max: usize,
) -> Result<Vec<DiagonalLimitRow>> {
    if !rule.is_nested(family) {
        return Err(Error::NonNestedRule(rule.name()));
    }
    let first = family.exhaustion(rule, 1)?;
    if !first.contains(x) {
        return Err(Error::UnknownVertex(format!("{x} not in F_1")));
    }
    if !first.contains(y) {
        return Err(Error::UnknownVertex(format!("{y} not in F_1")));
    }
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let section = family.exhaustion(rule, k)?;
        let t = build_truncation_from_gram(gram_closed_form(family, &section)?)?;
        let a = t.reconstruct_dipole(x.as_str())?;
        let b = t.reconstruct_dipole(y.as_str())?;
        let big_t = t.truncated_laplacian();
        let (c, _) = t.project_delta();
        let mut lhs = 0.0;
        for i in 0..t.rank() {
            for j in 0..t.rank() {
                lhs += a[i] * (big_t[[i, j]] - c[i] * c[j]) * b[j];
            }
        }
        let rhs = if x == y { 1.0 } else { 0.0 };
        rows.push(DiagonalLimitRow {
            k,
            n_f: section.len(),
            residual: lhs - rhs,
        });
    }
    Ok(rows)
}
