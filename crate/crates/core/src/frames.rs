//! Frame systems and their analysis/synthesis transforms.
//!
//! A system pairs one functional `f_a` with one synthesis vector `tau_a` per
//! index of a weighted measure space. Dense systems store both families as
//! explicit coordinate rows over a finite-dimensional ambient space; diagonal
//! systems realize `f_n = w_n zeta_n`, `tau_n = e_n / w_n` with `w_n = n^r`
//! on a truncated sequence space, so the functional family is unbounded while
//! reconstruction stays exact. Reconstruction means `x
//! = sum_a mu(a) f_a(x) tau_a` for every ambient `x`.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::spaces::{norm_of_entries, Exponent, Field, IndexSet, MeasureSpace, Scalar};
use crate::spaces::Vector;

/// Default relative support tolerance: coefficients at most this fraction of
/// the largest coefficient magnitude are treated as zero.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-10;

/// Absolute floor for the support cutoff, so denormal residue never counts
/// as support even at tolerance zero.
pub const SUPPORT_FLOOR: f64 = 1e-300;

/// How the functionals and synthesis vectors are stored.
#[derive(Clone, Debug, PartialEq)]
pub enum Repr {
    /// `analysis[a]` holds the coordinates of `f_a` (evaluation is a plain
    /// dot product, no conjugation); `synthesis[a]` holds the coordinates of
    /// `tau_a`.
    Dense {
        analysis: Vec<Vec<Scalar>>,
        synthesis: Vec<Vec<Scalar>>,
    },
    /// `f_n = n^rate * zeta_n` and `tau_n = e_n / n^rate` on `{1, ..., N}`.
    Diagonal { rate: f64 },
}

/// A frame system over a weighted measure space.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSystem {
    space: MeasureSpace,
    ambient: IndexSet,
    field: Field,
    p: Exponent,
    repr: Repr,
}

/// Outcome of the reconstruction check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructionReport {
    pub holds: bool,
    /// Largest entrywise deviation of synthesize(analyze(e_k)) from e_k.
    pub deviation: f64,
}

/// Tail behaviour of a candidate sequence-space vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailDescriptor {
    /// Finitely many nonzero entries.
    FiniteSupport,
    /// `|x_n| = amplitude * n^(-decay)` for `n >= onset`.
    PowerLaw {
        amplitude: f64,
        decay: f64,
        onset: usize,
    },
}

impl TailDescriptor {
    pub fn power_law(amplitude: f64, decay: f64, onset: usize) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) || !decay.is_finite() || onset == 0 {
            return Err(Error::Construction(format!(
                "power-law tail needs finite amplitude > 0, finite decay, onset >= 1; \
                 got amplitude={amplitude}, decay={decay}, onset={onset}"
            )));
        }
        Ok(TailDescriptor::PowerLaw {
            amplitude,
            decay,
            onset,
        })
    }
}

/// Diagonal weight `n^rate`, exact for integer rates within f64 range.
pub(crate) fn diagonal_weight(rate: f64, n: usize) -> f64 {
    if rate == 1.0 {
        n as f64
    } else if rate.fract() == 0.0 && (1.0..=16.0).contains(&rate) {
        (n as f64).powi(rate as i32)
    } else {
        (n as f64).powf(rate)
    }
}

impl FrameSystem {
    /// Dense system over `{0, ..., dim-1}`: one analysis row and one
    /// synthesis vector per index of `space`.
    pub fn dense(
        space: MeasureSpace,
        dim: usize,
        field: Field,
        p: Exponent,
        analysis: Vec<Vec<Scalar>>,
        synthesis: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if !matches!(space.indices(), IndexSet::Finite { .. }) {
            return Err(Error::Construction(
                "dense systems require a finite measure space".into(),
            ));
        }
        if analysis.len() != space.size() || synthesis.len() != space.size() {
            return Err(Error::DimensionMismatch {
                expected: space.size(),
                found: analysis.len().max(synthesis.len()),
            });
        }
        for family in [&analysis, &synthesis] {
            for row in family {
                if row.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: row.len(),
                    });
                }
                for (j, v) in row.iter().enumerate() {
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(Error::NonFiniteScalar { index: j });
                    }
                    if field == Field::Real && v.im != 0.0 {
                        return Err(Error::Construction(
                            "real-tagged system holds a scalar with nonzero imaginary part".into(),
                        ));
                    }
                }
            }
        }
        Ok(FrameSystem {
            space,
            ambient: IndexSet::finite(dim),
            field,
            p,
            repr: Repr::Dense {
                analysis,
                synthesis,
            },
        })
    }

    /// Diagonal system `f_n = n^rate zeta_n`, `tau_n = e_n / n^rate` on the
    /// truncated sequence space `{1, ..., bound}` with counting measure.
    pub fn diagonal(bound: usize, rate: f64, field: Field, p: Exponent) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::Construction(format!(
                "diagonal rate must be positive and finite, got {rate}"
            )));
        }
        if bound == 0 {
            return Err(Error::Construction(
                "diagonal truncation bound must be at least 1".into(),
            ));
        }
        Ok(FrameSystem {
            space: MeasureSpace::counting(IndexSet::sequence(bound)),
            ambient: IndexSet::sequence(bound),
            field,
            p,
            repr: Repr::Diagonal { rate },
        })
    }

    /// Replaces the measure by explicit weights and rescales each synthesis
    /// vector by `1/weight`, which preserves reconstruction.
    pub fn reweighted(base: &FrameSystem, weights: Vec<f64>) -> Result<Self> {
        let Repr::Dense {
            analysis,
            synthesis,
        } = &base.repr
        else {
            return Err(Error::UnsupportedRepresentation {
                operation: "reweighted",
                required: "dense",
            });
        };
        let space = MeasureSpace::weighted(base.space.indices(), weights)?;
        let rescaled: Vec<Vec<Scalar>> = synthesis
            .iter()
            .enumerate()
            .map(|(pos, tau)| {
                let w = space.weight(space.indices().first() + pos);
                tau.iter().map(|&v| v / w).collect()
            })
            .collect();
        FrameSystem::dense(
            space,
            base.ambient.size(),
            base.field,
            base.p,
            analysis.clone(),
            rescaled,
        )
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn ambient(&self) -> IndexSet {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense { .. })
    }

    /// Diagonal growth rate, when applicable.
    pub fn diagonal_rate(&self) -> Option<f64> {
        match self.repr {
            Repr::Diagonal { rate } => Some(rate),
            _ => None,
        }
    }

    /// Analysis rows and synthesis vectors of a dense system.
    pub fn dense_parts(&self) -> Option<(&[Vec<Scalar>], &[Vec<Scalar>])> {
        match &self.repr {
            Repr::Dense {
                analysis,
                synthesis,
            } => Some((analysis, synthesis)),
            _ => None,
        }
    }

    /// `f_a(x)` for one index `a` of the system's measure space.
    pub fn functional_value(&self, a: usize, x: &Vector) -> Result<Scalar> {
        self.space.indices().check(a)?;
        if x.indices() != self.ambient {
            return Err(Error::IndexSetMismatch);
        }
        Ok(match &self.repr {
            Repr::Dense { analysis, .. } => {
                let row = &analysis[self.space.indices().offset(a)];
                x.entries().map(|(j, v)| row[j] * v).sum()
            }
            Repr::Diagonal { rate } => x.get(a) * diagonal_weight(*rate, a),
        })
    }

    /// `tau_a` as a sparse vector.
    pub fn synthesis_vector(&self, a: usize) -> Result<Vector> {
        self.space.indices().check(a)?;
        match &self.repr {
            Repr::Dense { synthesis, .. } => {
                let coords = &synthesis[self.space.indices().offset(a)];
                Vector::new(self.ambient, coords.iter().copied().enumerate())
            }
            Repr::Diagonal { rate } => Vector::new(
                self.ambient,
                [(a, Scalar::new(1.0 / diagonal_weight(*rate, a), 0.0))],
            ),
        }
    }

    /// JSON form of the system.
    pub fn to_json(&self) -> Value {
        let mut measure = Map::new();
        measure.insert("kind".into(), json!(self.space.indices().kind_str()));
        measure.insert("n".into(), json!(self.space.size()));
        if let Some(w) = self.space.weights() {
            measure.insert("weights".into(), json!(w));
        }
        let complex = self.field == Field::Complex;
        let repr = match &self.repr {
            Repr::Dense {
                analysis,
                synthesis,
            } => json!({
                "kind": "dense",
                "analysis": rows_to_json(analysis, complex),
                "synthesis": rows_to_json(synthesis, complex),
            }),
            Repr::Diagonal { rate } => json!({ "kind": "diagonal", "r": rate.to_string() }),
        };
        json!({
            "p": self.p.to_string(),
            "field": self.field.as_str(),
            "measure": Value::Object(measure),
            "repr": repr,
        })
    }

    /// Parses the JSON form produced by [`FrameSystem::to_json`].
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Json("frame system must be an object".into()))?;
        let p = match obj.get("p") {
            Some(Value::String(s)) => Exponent::parse(s)?,
            Some(Value::Number(n)) => {
                Exponent::finite(n.as_f64().ok_or_else(|| Error::Json("bad p".into()))?)?
            }
            _ => return Err(Error::Json("frame system needs \"p\"".into())),
        };
        let field = Field::parse(
            obj.get("field")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Json("frame system needs \"field\"".into()))?,
        )?;
        let measure = obj
            .get("measure")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Json("frame system needs \"measure\"".into()))?;
        let kind = measure
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("measure needs \"kind\"".into()))?;
        let n = measure
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("measure needs integer \"n\"".into()))? as usize;
        let indices = match kind {
            "finite" => IndexSet::finite(n),
            "sequence" => IndexSet::sequence(n),
            other => return Err(Error::Json(format!("unknown measure kind {other:?}"))),
        };
        let space = match measure.get("weights") {
            None | Some(Value::Null) => MeasureSpace::counting(indices),
            Some(Value::Array(raw)) => {
                let mut weights = Vec::with_capacity(raw.len());
                for w in raw {
                    weights.push(
                        w.as_f64()
                            .ok_or_else(|| Error::Json("weights must be numbers".into()))?,
                    );
                }
                MeasureSpace::weighted(indices, weights)?
            }
            _ => return Err(Error::Json("weights must be an array".into())),
        };
        let repr = obj
            .get("repr")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Json("frame system needs \"repr\"".into()))?;
        match repr.get("kind").and_then(Value::as_str) {
            Some("dense") => {
                let analysis = rows_from_json(repr.get("analysis"), "analysis")?;
                let synthesis = rows_from_json(repr.get("synthesis"), "synthesis")?;
                let dim = analysis.first().map_or(0, Vec::len);
                FrameSystem::dense(space, dim, field, p, analysis, synthesis)
            }
            Some("diagonal") => {
                let rate = match repr.get("r") {
                    Some(Value::String(s)) => s
                        .parse::<f64>()
                        .map_err(|_| Error::Json(format!("bad diagonal rate {s:?}")))?,
                    Some(Value::Number(x)) => x
                        .as_f64()
                        .ok_or_else(|| Error::Json("bad diagonal rate".into()))?,
                    _ => return Err(Error::Json("diagonal repr needs \"r\"".into())),
                };
                FrameSystem::diagonal(n, rate, field, p)
            }
            other => Err(Error::Json(format!("unknown repr kind {other:?}"))),
        }
    }
}

fn scalar_to_json(v: Scalar, complex: bool) -> Value {
    if complex {
        json!([v.re, v.im])
    } else {
        json!(v.re)
    }
}

fn rows_to_json(rows: &[Vec<Scalar>], complex: bool) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| Value::Array(row.iter().map(|&v| scalar_to_json(v, complex)).collect()))
            .collect(),
    )
}

fn scalar_from_json(value: &Value) -> Result<Scalar> {
    match value {
        Value::Number(x) => Ok(Scalar::new(
            x.as_f64().ok_or_else(|| Error::Json("bad scalar".into()))?,
            0.0,
        )),
        Value::Array(parts) if parts.len() == 2 => {
            let re = parts[0]
                .as_f64()
                .ok_or_else(|| Error::Json("bad scalar re".into()))?;
            let im = parts[1]
                .as_f64()
                .ok_or_else(|| Error::Json("bad scalar im".into()))?;
            Ok(Scalar::new(re, im))
        }
        _ => Err(Error::Json(
            "scalar must be a number or a [re, im] pair".into(),
        )),
    }
}

fn rows_from_json(value: Option<&Value>, name: &str) -> Result<Vec<Vec<Scalar>>> {
    let raw = value
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json(format!("dense repr needs \"{name}\" rows")))?;
    let mut rows = Vec::with_capacity(raw.len());
    for row in raw {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Json(format!("{name} row must be an array")))?;
        rows.push(cells.iter().map(scalar_from_json).collect::<Result<_>>()?);
    }
    Ok(rows)
}

/// Analysis coefficients of `x`: values of every functional, with entries at
/// most `tol * max |coefficient|` (and never below the absolute floor)
/// dropped. The same relative rule makes supports invariant under scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientFunction {
    space: MeasureSpace,
    values: BTreeMap<usize, Scalar>,
    tolerance: f64,
}

impl CoefficientFunction {
    /// Manual construction (drops exact zeros, applies no tolerance cut).
    pub fn new(
        space: MeasureSpace,
        values: impl IntoIterator<Item = (usize, Scalar)>,
        tolerance: f64,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (index, value) in values {
            space.indices().check(index)?;
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::NonFiniteScalar { index });
            }
            if value != Scalar::ZERO {
                map.insert(index, value);
            }
        }
        Ok(CoefficientFunction {
            space,
            values: map,
            tolerance,
        })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn get(&self, index: usize) -> Scalar {
        self.values.get(&index).copied().unwrap_or(Scalar::ZERO)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, Scalar)> + '_ {
        self.values.iter().map(|(&i, &v)| (i, v))
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.values.keys().copied().collect()
    }

    pub fn support_size(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Weighted lp norm over the coefficient space.
    pub fn norm(&self, p: Exponent) -> f64 {
        norm_of_entries(self.entries(), p, &self.space)
    }
}

/// Applies every functional to `x` and keeps coefficients above the relative
/// support cutoff `max(tol * max_magnitude, floor)`.
pub fn analyze(sys: &FrameSystem, x: &Vector, tol: f64) -> Result<CoefficientFunction> {
    if x.indices() != sys.ambient() {
        return Err(Error::IndexSetMismatch);
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::Construction(format!(
            "support tolerance must be finite and non-negative, got {tol}"
        )));
    }
    let mut raw: Vec<(usize, Scalar)> = Vec::new();
    match &sys.repr {
        Repr::Dense { analysis, .. } => {
            let first = sys.space.indices().first();
            for (pos, row) in analysis.iter().enumerate() {
                let value: Scalar = x.entries().map(|(j, v)| row[j] * v).sum();
                raw.push((first + pos, value));
            }
        }
        Repr::Diagonal { rate } => {
            for (n, v) in x.entries() {
                raw.push((n, v * diagonal_weight(*rate, n)));
            }
        }
    }
    let max_mag = raw.iter().map(|(_, v)| v.norm()).fold(0.0_f64, f64::max);
    let cutoff = (tol * max_mag).max(SUPPORT_FLOOR);
    let kept = raw.into_iter().filter(|(_, v)| v.norm() > cutoff);
    CoefficientFunction::new(sys.space.clone(), kept, tol)
}

/// Weighted synthesis `sum_a mu(a) c(a) tau_a`.
pub fn synthesize(sys: &FrameSystem, c: &CoefficientFunction) -> Result<Vector> {
    if c.space() != sys.space() {
        return Err(Error::SpaceMismatch);
    }
    match &sys.repr {
        Repr::Dense { synthesis, .. } => {
            let dim = sys.ambient.size();
            let mut coords = vec![Scalar::ZERO; dim];
            for (a, value) in c.entries() {
                let tau = &synthesis[sys.space.indices().offset(a)];
                let scale = value * sys.space.weight(a);
                for (j, coord) in coords.iter_mut().enumerate() {
                    *coord += scale * tau[j];
                }
            }
            Vector::new(sys.ambient, coords.into_iter().enumerate())
        }
        Repr::Diagonal { rate } => {
            let counting = sys.space.is_counting();
            let entries = c.entries().map(|(n, value)| {
                let mut v = value / diagonal_weight(*rate, n);
                if !counting {
                    v *= sys.space.weight(n);
                }
                (n, v)
            });
            Vector::new(sys.ambient, entries)
        }
    }
}

/// Checks that synthesize(analyze(e_k)) returns e_k for every ambient basis
/// vector; diagonal systems reconstruct exactly by construction.
pub fn is_reconstructing(sys: &FrameSystem, tol: f64) -> Result<ReconstructionReport> {
    match &sys.repr {
        Repr::Diagonal { .. } => Ok(ReconstructionReport {
            holds: true,
            deviation: 0.0,
        }),
        Repr::Dense { .. } => {
            let mut deviation = 0.0_f64;
            for k in sys.ambient.iter() {
                let e_k = Vector::basis(sys.ambient, k)?;
                let back = synthesize(sys, &analyze(sys, &e_k, 0.0)?)?;
                for j in sys.ambient.iter() {
                    let target = if j == k { Scalar::ONE } else { Scalar::ZERO };
                    deviation = deviation.max((back.get(j) - target).norm());
                }
            }
            Ok(ReconstructionReport {
                holds: deviation <= tol,
                deviation,
            })
        }
    }
}

/// Whether a sequence with the given tail lies in the domain of the analysis
/// operator of a diagonal system: the weighted coefficients must be
/// p-summable (p finite) or bounded (p infinite).
pub fn in_domain(sys: &FrameSystem, tail: &TailDescriptor) -> Result<bool> {
    let Some(rate) = sys.diagonal_rate() else {
        return Err(Error::UnsupportedRepresentation {
            operation: "in_domain",
            required: "diagonal",
        });
    };
    Ok(match tail {
        TailDescriptor::FiniteSupport => true,
        TailDescriptor::PowerLaw { decay, .. } => match sys.p {
            // sum over n of n^(p(rate-decay)) converges iff p(rate-decay) < -1
            Exponent::Finite(p) => p * (rate - decay) < -1.0,
            // sup over n of n^(rate-decay) is finite iff rate <= decay
            Exponent::Infinity => rate - decay <= 0.0,
        },
    })
}
