//! The straight-line deformation of the deleted product `K*` onto the
//! simplicial deleted product, in barycentric coordinates.
//!
//! With `δ_i(x, y) = max(x_i - y_i, 0)`, `α(x, y) = δ / Σδ`, and the pair at
//! time `t` is `((1-t)x + tα(x,y), (1-t)y + tα(y,x))`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

pub const TOLERANCE: f64 = 1e-12;

/// A point of `|K|` as barycentric coordinates over all vertices of `K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaryPoint {
    coords: Vec<f64>,
}

impl BaryPoint {
    /// Checks nonnegativity, the unit sum within [`TOLERANCE`], and that
    /// the support is a simplex of `k`.
    pub fn new(k: &SimplicialComplex, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != k.vertex_count() {
            return Err(Error::usage(format!(
                "{} coordinates for {} vertices",
                coords.len(),
                k.vertex_count()
            )));
        }
        if coords.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::Domain("coordinates must be finite and nonnegative".into()));
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > TOLERANCE {
            return Err(Error::Domain(format!("coordinates sum to {sum}, not 1")));
        }
        let p = BaryPoint { coords };
        if !k.contains(&p.support()) {
            return Err(Error::Domain(
                "the support is not a simplex of the complex".into(),
            ));
        }
        Ok(p)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Vertices with positive weight.
    pub fn support(&self) -> Simplex {
        Simplex::new(
            self.coords
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0.0)
                .map(|(i, _)| i as u32)
                .collect(),
        )
    }

    fn max_distance(&self, other: &BaryPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// The normalized positive part of `x - y`. Its support lies in that of `x`.
pub fn alpha(x: &BaryPoint, y: &BaryPoint) -> Result<BaryPoint> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::usage("points live on different complexes"));
    }
    let delta: Vec<f64> = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| (a - b).max(0.0))
        .collect();
    let sum: f64 = delta.iter().sum();
    if sum <= 0.0 {
        return Err(Error::Domain("alpha is undefined on the diagonal".into()));
    }
    Ok(BaryPoint {
        coords: delta.into_iter().map(|d| d / sum).collect(),
    })
}

fn blend(p: &BaryPoint, q: &BaryPoint, t: f64) -> BaryPoint {
    BaryPoint {
        coords: p
            .coords
            .iter()
            .zip(&q.coords)
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect(),
    }
}

/// The pair at time `t ∈ [0, 1]`.
pub fn retraction_path(x: &BaryPoint, y: &BaryPoint, t: f64) -> Result<(BaryPoint, BaryPoint)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::usage(format!("time {t} is outside [0, 1]")));
    }
    let ax = alpha(x, y)?;
    let ay = alpha(y, x)?;
    Ok((blend(x, &ax, t), blend(y, &ay, t)))
}

/// Which property a counterexample breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// At `t = 1` both supports are simplices of `K` and are disjoint.
    EndpointDisjoint,
    /// Pairs with disjoint supports do not move.
    FixedPoints,
    /// The two points stay distinct.
    StaysOffDiagonal,
    /// Swapping the inputs swaps the path bit for bit.
    Equivariance,
    /// The path is defined and finite.
    WellDefined,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub property: Property,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RetractionReport {
    pub seed: u64,
    pub random_pairs: usize,
    pub disjoint_pairs: usize,
    pub near_diagonal_pairs: usize,
    /// Number of individual assertions evaluated.
    pub checks: usize,
    /// The first few failures.
    pub failures: Vec<Counterexample>,
    pub failure_count: usize,
}

impl RetractionReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// The sampled times `0, 0.1, …, 1`.
pub fn sample_times() -> Vec<f64> {
    (0..=10).map(|i| f64::from(i) / 10.0).collect()
}

const MAX_REPORTED_FAILURES: usize = 20;
const NEAR_DIAGONAL_GAP: f64 = 1e-9;

struct Harness<'a> {
    k: &'a SimplicialComplex,
    report: RetractionReport,
}

impl Harness<'_> {
    fn fail(&mut self, property: Property, x: &BaryPoint, y: &BaryPoint, t: Option<f64>, detail: String) {
        self.report.failure_count += 1;
        if self.report.failures.len() < MAX_REPORTED_FAILURES {
            self.report.failures.push(Counterexample {
                property,
                x: x.coords.clone(),
                y: y.coords.clone(),
                t,
                detail,
            });
        }
    }

    fn check_pair(&mut self, x: &BaryPoint, y: &BaryPoint) {
        let times = sample_times();
        let mut paths = Vec::with_capacity(times.len());
        for &t in &times {
            let (Ok(fwd), Ok(back)) = (retraction_path(x, y, t), retraction_path(y, x, t)) else {
                self.fail(Property::WellDefined, x, y, Some(t), "alpha failed".into());
                return;
            };
            self.report.checks += 2;
            if fwd.0.coords.iter().chain(&fwd.1.coords).any(|c| !c.is_finite()) {
                self.fail(
                    Property::WellDefined,
                    x,
                    y,
                    Some(t),
                    "non-finite coordinate".into(),
                );
                return;
            }
            if fwd.0.coords != back.1.coords || fwd.1.coords != back.0.coords {
                self.fail(
                    Property::Equivariance,
                    x,
                    y,
                    Some(t),
                    "swapped path differs".into(),
                );
            }
            paths.push(fwd);
        }

        let gap = x.max_distance(y);
        for (&t, (p, q)) in times.iter().zip(&paths) {
            self.report.checks += 1;
            let d = p.max_distance(q);
            if d <= TOLERANCE.min(gap / 2.0) {
                self.fail(
                    Property::StaysOffDiagonal,
                    x,
                    y,
                    Some(t),
                    format!("points {d} apart"),
                );
            }
        }

        let (end_x, end_y) = paths.last().expect("eleven sampled times");
        let (sx, sy) = (end_x.support(), end_y.support());
        self.report.checks += 1;
        if !sx.is_disjoint(&sy) || !self.k.contains(&sx) || !self.k.contains(&sy) {
            self.fail(
                Property::EndpointDisjoint,
                x,
                y,
                Some(1.0),
                format!("end supports {:?} and {:?}", sx.vertices(), sy.vertices()),
            );
        }

        if x.support().is_disjoint(&y.support()) {
            for (&t, (p, q)) in times.iter().zip(&paths) {
                self.report.checks += 1;
                let drift = p.max_distance(x).max(q.max_distance(y));
                if drift > TOLERANCE {
                    self.fail(Property::FixedPoints, x, y, Some(t), format!("moved by {drift}"));
                }
            }
        }
    }
}

fn random_point_on(k: &SimplicialComplex, s: &Simplex, rng: &mut ChaCha8Rng) -> BaryPoint {
    let mut coords = vec![0.0; k.vertex_count()];
    let weights: Vec<f64> = s
        .vertices()
        .iter()
        .map(|_| rng.sample::<f64, _>(Exp1) + f64::MIN_POSITIVE)
        .collect();
    let total: f64 = weights.iter().sum();
    for (&v, w) in s.vertices().iter().zip(weights) {
        coords[v as usize] = w / total;
    }
    BaryPoint { coords }
}

/// Samples pairs of distinct points of `|K|` and checks the deformation.
///
/// Three families are drawn: `samples` pairs from random facets, up to
/// `samples` pairs on disjoint simplices, and `samples` pairs a distance
/// of about `1e-9` apart inside one facet.
pub fn check_retraction_properties(
    k: &SimplicialComplex,
    samples: usize,
    seed: u64,
) -> Result<RetractionReport> {
    if samples == 0 {
        return Err(Error::usage("at least one sample is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = Harness {
        k,
        report: RetractionReport {
            seed,
            ..RetractionReport::default()
        },
    };
    let facets = k.facets();
    let simplices: Vec<&Simplex> = k.all_simplices().collect();

    while h.report.random_pairs < samples {
        let x = random_point_on(k, facets.choose(&mut rng).expect("facets exist"), &mut rng);
        let y = random_point_on(k, facets.choose(&mut rng).expect("facets exist"), &mut rng);
        if x == y {
            continue;
        }
        h.check_pair(&x, &y);
        h.report.random_pairs += 1;
    }

    for _ in 0..samples {
        let s = *simplices.choose(&mut rng).expect("simplices exist");
        let Some(t) = (0..32)
            .map(|_| *simplices.choose(&mut rng).expect("simplices exist"))
            .find(|t| t.is_disjoint(s))
        else {
            continue;
        };
        let x = random_point_on(k, s, &mut rng);
        let y = random_point_on(k, t, &mut rng);
        h.check_pair(&x, &y);
        h.report.disjoint_pairs += 1;
    }

    let wide: Vec<&Simplex> = facets.iter().filter(|f| f.dim() >= 1).collect();
    if !wide.is_empty() {
        for _ in 0..samples {
            let f = *wide.choose(&mut rng).expect("nonempty");
            let x = random_point_on(k, f, &mut rng);
            let verts = f.vertices();
            let i = verts[rng.gen_range(0..verts.len())] as usize;
            let Some(&j) = verts
                .iter()
                .find(|&&v| v as usize != i && x.coords[v as usize] > 2.0 * NEAR_DIAGONAL_GAP)
            else {
                continue;
            };
            let mut y = x.clone();
            y.coords[i] += NEAR_DIAGONAL_GAP;
            y.coords[j as usize] -= NEAR_DIAGONAL_GAP;
            h.check_pair(&x, &y);
            h.report.near_diagonal_pairs += 1;
        }
    }
    Ok(h.report)
}
