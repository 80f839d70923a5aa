//! Detection strategies and the transforms used to reshape them:
//! realification, rank-1 refinement, group shifts and convex combination
//! with amalgamation of parallel elements.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensembles::{matrix_to_pairs, pairs_to_matrix, RotationGen};
use crate::error::{invalid, Error, Result};
use crate::matcore::{hermitian_eigen, CMat, CVec, DEFAULT_TOL};

/// Default angular tolerance (radians) for merging parallel rank-1 elements.
pub const AMALGAMATION_TOL: f64 = 1e-8;

/// A finite POVM: square positive operators of a common dimension.
///
/// Construction only checks shapes; positivity and completeness are
/// reported by [`validate`].
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<CMat>,
    dim: usize,
}

impl Povm {
    pub fn new(elements: Vec<CMat>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| invalid!("a POVM needs at least one element"))?;
        let dim = first.rows();
        for (j, e) in elements.iter().enumerate() {
            if !e.is_square() || e.rows() != dim {
                return Err(invalid!(
                    "element {j} is {}x{}, expected {dim}x{dim}",
                    e.rows(),
                    e.cols()
                ));
            }
        }
        Ok(Self { elements, dim })
    }

    /// Builds the POVM and rejects it unless [`validate`] passes at `tol`.
    pub fn checked(elements: Vec<CMat>, tol: f64) -> Result<Self> {
        let p = Self::new(elements)?;
        let report = validate(&p, tol);
        if report.is_valid() {
            Ok(p)
        } else {
            Err(Error::ContractViolation(report.to_string()))
        }
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self) -> CMat {
        self.elements
            .iter()
            .fold(CMat::zeros(self.dim, self.dim), |acc, e| &acc + e)
    }

    pub fn to_json(&self) -> PovmJson {
        PovmJson::Full {
            dim: self.dim,
            elements: self.elements.iter().map(matrix_to_pairs).collect(),
        }
    }

    pub fn from_json(doc: &PovmJson) -> Result<Self> {
        match doc {
            PovmJson::Full { dim, elements } => {
                let mats = elements
                    .iter()
                    .enumerate()
                    .map(|(j, e)| {
                        pairs_to_matrix(*dim, e).map_err(|m| invalid!("element {j}: {m}"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(mats)
            }
            PovmJson::Rank1 {
                weights,
                angles_rad,
            } => Ok(Rank1Real::new(weights.clone(), angles_rad.clone())?.to_povm()),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let doc: PovmJson = serde_json::from_str(&text)?;
        Self::from_json(&doc)
    }
}

/// On-disk POVM, either the full element list or the compact rank-1 real form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PovmJson {
    Full {
        dim: usize,
        elements: Vec<Vec<[f64; 2]>>,
    },
    Rank1 {
        weights: Vec<f64>,
        angles_rad: Vec<f64>,
    },
}

/// Which POVM invariant an element (or the whole set) fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    NotHermitian,
    NotPositive,
    SumNotIdentity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// Offending element, or `None` for whole-set properties.
    pub element: Option<usize>,
    pub property: Property,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid POVM");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            match v.element {
                Some(j) => write!(f, "element {j}: {:?} ({})", v.property, v.detail)?,
                None => write!(f, "{:?} ({})", v.property, v.detail)?,
            }
        }
        Ok(())
    }
}

/// Checks hermiticity and positivity of every element and that the
/// elements sum to the identity, all at `tol` in the max norm.
pub fn validate(p: &Povm, tol: f64) -> ValidationReport {
    let mut violations = Vec::new();
    for (j, e) in p.elements().iter().enumerate() {
        let defect = e.hermiticity_defect();
        if defect > tol {
            violations.push(Violation {
                element: Some(j),
                property: Property::NotHermitian,
                detail: format!("‖A − A†‖ = {defect:.3e}"),
            });
            continue;
        }
        match crate::matcore::min_eigenvalue(e, tol) {
            Ok(lmin) if lmin < -tol => violations.push(Violation {
                element: Some(j),
                property: Property::NotPositive,
                detail: format!("minimum eigenvalue {lmin:.3e}"),
            }),
            Ok(_) => {}
            Err(err) => violations.push(Violation {
                element: Some(j),
                property: Property::NotPositive,
                detail: err.to_string(),
            }),
        }
    }
    let dev = p.sum().max_abs_diff(&CMat::identity(p.dim()));
    if dev > tol {
        violations.push(Violation {
            element: None,
            property: Property::SumNotIdentity,
            detail: format!("‖Σ π_j − I‖ = {dev:.3e}"),
        });
    }
    ValidationReport { violations }
}

/// Replaces each element by its entrywise real part.
///
/// For a real ensemble this leaves every outcome probability unchanged.
pub fn realify(p: &Povm) -> Result<Povm> {
    let elements: Vec<CMat> = p.elements().iter().map(CMat::real_part).collect();
    for (j, e) in elements.iter().enumerate() {
        if !crate::matcore::is_psd(e, DEFAULT_TOL)? {
            return Err(Error::ContractViolation(format!(
                "real part of element {j} is not positive"
            )));
        }
    }
    Povm::new(elements)
}

/// Splits every element into eigenvalue-weighted rank-1 projectors,
/// dropping eigenvalues at or below `tol`.
pub fn refine_rank1(p: &Povm, tol: f64) -> Result<Povm> {
    let mut out = Vec::new();
    for e in p.elements() {
        let pairs = hermitian_eigen(e, tol.max(DEFAULT_TOL))?;
        for pair in pairs.iter().rev().filter(|pair| pair.value > tol) {
            out.push(CMat::projector(&pair.vector).scale(pair.value));
        }
    }
    Povm::new(out)
}

/// Conjugates every element by `V^l`.
pub fn shift(p: &Povm, g: &RotationGen, l: i64) -> Result<Povm> {
    if p.dim() != 2 {
        return Err(invalid!("shift acts on qubit POVMs, got dim {}", p.dim()));
    }
    let u = g.power(l);
    Povm::new(p.elements().iter().map(|e| e.conjugate_by(&u)).collect())
}

/// Weight and unit direction of a rank-1 element, or `None` if the element
/// has more than one significant eigenvalue (`λ_2 > tol·(λ_1 + 1)`).
pub fn rank1_direction(e: &CMat, tol: f64) -> Result<Option<(f64, CVec)>> {
    let pairs = hermitian_eigen(e, tol)?;
    let Some((top, rest)) = pairs.split_last() else {
        return Ok(None);
    };
    let bound = tol * (top.value + 1.0);
    if rest.iter().any(|p| p.value.abs() > bound) {
        return Ok(None);
    }
    Ok(Some((top.value, top.vector.clone())))
}

/// Angle between two rays, insensitive to global phase. Uses the norm of
/// the orthogonal component so tiny angles are resolved accurately.
fn ray_angle(u: &CVec, v: &CVec) -> f64 {
    let ov = u.inner(v);
    let along = u.scale(ov);
    let perp = CVec::new(
        v.entries()
            .iter()
            .zip(along.entries())
            .map(|(a, b)| a - b)
            .collect(),
    );
    perp.norm().atan2(ov.norm())
}

/// Weighted union of POVMs. Rank-1 elements whose directions agree within
/// `angle_tol` are summed into one element; zero-trace elements are dropped.
/// Output order follows first appearance.
pub fn convex_combine(terms: &[(f64, Povm)], angle_tol: f64) -> Result<Povm> {
    let (_, first) = terms
        .first()
        .ok_or_else(|| invalid!("convex combination of zero POVMs"))?;
    let dim = first.dim();
    let mut total = 0.0;
    for (k, (w, p)) in terms.iter().enumerate() {
        if !w.is_finite() || *w < 0.0 {
            return Err(invalid!("weight {k} is {w}, expected non-negative"));
        }
        if p.dim() != dim {
            return Err(invalid!("term {k} has dim {}, expected {dim}", p.dim()));
        }
        total += w;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(invalid!("weights sum to {total}, expected 1"));
    }

    let mut merged: Vec<(CMat, Option<CVec>)> = Vec::new();
    for (w, p) in terms {
        for e in p.elements() {
            let scaled = e.scale(*w);
            if scaled.trace().re <= DEFAULT_TOL {
                continue;
            }
            let dir = rank1_direction(&scaled, DEFAULT_TOL)?.map(|(_, v)| v);
            let slot = dir.as_ref().and_then(|d| {
                merged.iter().position(|(_, existing)| {
                    existing
                        .as_ref()
                        .is_some_and(|x| ray_angle(x, d) <= angle_tol)
                })
            });
            match slot {
                Some(k) => merged[k].0 = &merged[k].0 + &scaled,
                None => merged.push((scaled, dir)),
            }
        }
    }
    Povm::new(merged.into_iter().map(|(m, _)| m).collect())
}

/// Maps an angle into `[0, π)`.
pub fn normalize_angle(t: f64) -> f64 {
    let r = t.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Rank-1 real qubit POVM `{w_a |a⟩⟨a|}` with `|a⟩ = (cos θ_a, sin θ_a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Real {
    weights: Vec<f64>,
    angles: Vec<f64>,
}

impl Rank1Real {
    /// Validates weights in `(0, 2]` summing to 2 and that the elements
    /// resolve the identity, both to 1e-10. Angles are reduced mod π.
    pub fn new(weights: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != angles.len() {
            return Err(invalid!(
                "{} weights and {} angles",
                weights.len(),
                angles.len()
            ));
        }
        for (a, (&w, &t)) in weights.iter().zip(&angles).enumerate() {
            if !w.is_finite() || w <= 0.0 || w > 2.0 + DEFAULT_TOL {
                return Err(invalid!("weight {a} is {w}, expected a value in (0, 2]"));
            }
            if !t.is_finite() {
                return Err(invalid!("angle {a} is not finite"));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 2.0).abs() > DEFAULT_TOL {
            return Err(invalid!("weights sum to {total}, expected 2"));
        }
        let r = Self {
            weights,
            angles: angles.into_iter().map(normalize_angle).collect(),
        };
        let dev = r.to_povm().sum().max_abs_diff(&CMat::identity(2));
        if dev > DEFAULT_TOL {
            return Err(invalid!(
                "elements do not resolve the identity (deviation {dev:.3e})"
            ));
        }
        Ok(r)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Angles in `[0, π)`.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn to_povm(&self) -> Povm {
        let elements = self
            .weights
            .iter()
            .zip(&self.angles)
            .map(|(&w, &t)| CMat::projector(&CVec::real_direction(t)).scale(w))
            .collect();
        Povm::new(elements).expect("rank-1 elements are 2x2")
    }

    pub fn to_json(&self) -> PovmJson {
        PovmJson::Rank1 {
            weights: self.weights.clone(),
            angles_rad: self.angles.clone(),
        }
    }
}

/// Converts a qubit POVM with real rank-1 elements to weight/angle form.
/// Zero-trace elements are dropped.
pub fn to_rank1_real(p: &Povm, tol: f64) -> Result<Rank1Real> {
    if p.dim() != 2 {
        return Err(invalid!("rank-1 real form needs dim 2, got {}", p.dim()));
    }
    let mut weights = Vec::with_capacity(p.len());
    let mut angles = Vec::with_capacity(p.len());
    for (index, e) in p.elements().iter().enumerate() {
        let tr = e.trace().re;
        if tr <= tol {
            continue;
        }
        if e.max_imag() > tol {
            return Err(Error::Conversion {
                index,
                reason: format!("imaginary part {:.3e}", e.max_imag()),
            });
        }
        let (_, dir) = rank1_direction(e, tol)?.ok_or_else(|| Error::Conversion {
            index,
            reason: "more than one nonzero eigenvalue".into(),
        })?;
        weights.push(tr);
        angles.push(normalize_angle(dir[1].re.atan2(dir[0].re)));
    }
    Rank1Real::new(weights, angles)
}
