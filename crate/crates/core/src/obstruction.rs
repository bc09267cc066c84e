//! Non-embeddability and coincidence verdicts derived from nontrivial
//! classes `w^(k)(M)`, and their certification on concrete triangulations
//! through the height of the simplicial deleted product.

use serde::Serialize;

use crate::char_class::{wk_classes, ManifoldModel};
use crate::cohomology::{sw_height, HeightOptions, HeightReport};
use crate::complex::{PseudomanifoldReport, SimplicialComplex};
use crate::deleted_product::{swap_quotient, triangulated_deleted_product};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Every map `K → R^target` sends two disjoint simplices with
    /// `dim σ + dim τ ≤ target` to intersecting sets.
    RadonCoincidence,
    /// Every map `K_skeleton → R^target` identifies points of two disjoint
    /// simplices; in particular the skeleton does not embed.
    SkeletonNonEmbeddable,
}

/// The argument a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Height bound `h ≥ D` plus the Borsuk-Ulam argument (level 0).
    BorsukUlam,
    /// Height bound `h ≥ D + k` for `k ≥ 1`.
    Radon,
    /// The constraint method applied to the coincidence statement.
    Constraint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Certification {
    SymbolicOnly,
    HeightCertified { h: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub manifold: String,
    /// Dimension `D` of the manifold.
    pub manifold_dim: usize,
    /// Level `k` of the nontrivial class `w^(k)`.
    pub level: usize,
    pub kind: ClaimKind,
    pub route: Route,
    /// `d` with `D = 2d + k + 1`, for skeleton claims.
    pub d: Option<usize>,
    /// Skeleton the maps are defined on; `None` means all of `K`.
    pub skeleton_dim: Option<usize>,
    pub target_dim: usize,
    /// Bound on `dim σ + dim τ` for the coincidence pair.
    pub dim_sum_bound: Option<usize>,
    /// The nonzero classes `w_i^(k)`, as `(i, value)`.
    pub evidence: Vec<(usize, String)>,
    pub certification: Certification,
}

/// Every verdict the classes of `model` imply for triangulations of a
/// `manifold_dim`-manifold.
pub fn enumerate_claims(model: &ManifoldModel, manifold_dim: usize) -> Result<Vec<Verdict>> {
    let big_d = manifold_dim;
    if model.dim() != big_d {
        return Err(Error::usage(format!(
            "model {} has {} Stiefel-Whitney classes, expected {big_d}",
            model.name(),
            model.dim()
        )));
    }
    let mut out = Vec::new();
    for k in 0..big_d {
        let classes = wk_classes(model, k)?;
        if !classes.nontrivial {
            continue;
        }
        let evidence: Vec<(usize, String)> = classes
            .by_index
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i + 1, model.algebra.format(c)))
            .collect();
        let base = Verdict {
            manifold: model.name().to_string(),
            manifold_dim: big_d,
            level: k,
            kind: ClaimKind::RadonCoincidence,
            route: if k == 0 { Route::BorsukUlam } else { Route::Radon },
            d: None,
            skeleton_dim: None,
            target_dim: big_d + k,
            dim_sum_bound: Some(big_d + k),
            evidence,
            certification: Certification::SymbolicOnly,
        };
        if let Some(d) = skeleton_parameter(big_d, k) {
            out.push(base.clone());
            out.push(Verdict {
                kind: ClaimKind::SkeletonNonEmbeddable,
                route: Route::Constraint,
                d: Some(d),
                skeleton_dim: Some(d + k),
                target_dim: 2 * d + 2 * k,
                dim_sum_bound: None,
                ..base
            });
        } else {
            out.push(base);
        }
    }
    Ok(out)
}

/// `d` with `D = 2d + k + 1`, `d ≥ 1` and `k ≤ d - 1`, if it exists.
pub fn skeleton_parameter(big_d: usize, k: usize) -> Option<usize> {
    let rest = big_d.checked_sub(k + 1)?;
    (rest % 2 == 0).then_some(rest / 2).filter(|&d| d >= 1 && k < d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificationStatus {
    /// `h ≥ D + k`: the coincidence statement holds for this triangulation.
    Certified,
    /// The model says `w^(k) = 1`; nothing is predicted.
    NoClaim,
    /// No model was given and the height falls short.
    NotCertified,
    /// The model predicts `h ≥ D + k` but the computed height is lower.
    PredictionFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub manifold_dim: usize,
    pub level: usize,
    pub target: usize,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub pseudomanifold: PseudomanifoldReport,
    pub warnings: Vec<String>,
    pub model: Option<String>,
    /// Whether `w^(level)` is nontrivial in the model, if one was given.
    pub hypothesis: Option<bool>,
    pub evidence: Vec<(usize, String)>,
    pub height: HeightReport,
    pub status: CertificationStatus,
    /// Claims at this level, with the coincidence claim marked certified
    /// when the height bound holds.
    pub verdicts: Vec<Verdict>,
}

/// Computes the height of the deleted product of `k` and compares it with
/// `manifold_dim + level`.
///
/// A failed pseudomanifold check or a dimension mismatch is recorded as a
/// warning. The height is computed in full unless `opts` caps it.
pub fn certify_height_bound(
    k: &SimplicialComplex,
    manifold_dim: usize,
    level: usize,
    model: Option<&ManifoldModel>,
    opts: &HeightOptions,
) -> Result<CertificationReport> {
    let pseudomanifold = k.check_closed_pseudomanifold();
    let mut warnings = Vec::new();
    if !pseudomanifold.passed() {
        warnings.push("the complex fails the closed pseudomanifold check".to_string());
    }
    if k.dim() != manifold_dim {
        warnings.push(format!(
            "the complex has dimension {}, not the stated manifold dimension {manifold_dim}",
            k.dim()
        ));
    }
    let (hypothesis, evidence, mut verdicts) = match model {
        Some(m) => {
            let classes = wk_classes(m, level)?;
            let claims: Vec<Verdict> = enumerate_claims(m, manifold_dim)?
                .into_iter()
                .filter(|v| v.level == level)
                .collect();
            let evidence = classes
                .by_index
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i + 1, m.algebra.format(c)))
                .collect();
            (Some(classes.nontrivial), evidence, claims)
        }
        None => (None, Vec::new(), Vec::new()),
    };
    let target = manifold_dim + level;
    let quotient = swap_quotient(&triangulated_deleted_product(k))?;
    let height = sw_height(&quotient, opts)?;
    let reached = height.h >= target;
    let status = match (hypothesis, reached) {
        (Some(false), _) => CertificationStatus::NoClaim,
        (_, true) => CertificationStatus::Certified,
        (Some(true), false) => CertificationStatus::PredictionFailed,
        (None, false) => CertificationStatus::NotCertified,
    };
    if reached {
        for v in verdicts
            .iter_mut()
            .filter(|v| v.kind == ClaimKind::RadonCoincidence)
        {
            v.certification = Certification::HeightCertified { h: height.h };
        }
    }
    Ok(CertificationReport {
        manifold_dim,
        level,
        target,
        f_vector: k.f_vector(),
        euler_characteristic: k.euler_characteristic(),
        pseudomanifold,
        warnings,
        model: model.map(|m| m.name().to_string()),
        hypothesis,
        evidence,
        height,
        status,
        verdicts,
    })
}
