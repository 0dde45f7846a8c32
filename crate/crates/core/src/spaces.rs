//! Index sets, weighted measure spaces, sparse vectors, and lp norms.
//!
//! Two index-set shapes are supported: `{0, ..., n-1}` for finite-dimensional
//! spaces and the initial segment `{1, ..., N}` of the natural numbers for
//! truncated sequence spaces. A measure space attaches strictly positive
//! weights to an index set (counting measure by default); vectors store only
//! their nonzero entries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Complex scalar; real data is carried with a zero imaginary part.
pub type Scalar = Complex64;

/// Scalar field tag for containers whose entries are constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(Error::Json(format!("unknown field tag {other:?}"))),
        }
    }
}

/// Finite index set: either `{0, ..., n-1}` or the truncated sequence
/// `{1, ..., bound}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSet {
    Finite { n: usize },
    Sequence { bound: usize },
}

impl IndexSet {
    pub fn finite(n: usize) -> Self {
        IndexSet::Finite { n }
    }

    pub fn sequence(bound: usize) -> Self {
        IndexSet::Sequence { bound }
    }

    /// Number of indices.
    pub fn size(self) -> usize {
        match self {
            IndexSet::Finite { n } => n,
            IndexSet::Sequence { bound } => bound,
        }
    }

    /// Smallest index (0 for finite spaces, 1 for sequence spaces).
    pub fn first(self) -> usize {
        match self {
            IndexSet::Finite { .. } => 0,
            IndexSet::Sequence { .. } => 1,
        }
    }

    pub fn contains(self, index: usize) -> bool {
        match self {
            IndexSet::Finite { n } => index < n,
            IndexSet::Sequence { bound } => 1 <= index && index <= bound,
        }
    }

    pub fn check(self, index: usize) -> Result<()> {
        if self.contains(index) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                size: self.size(),
            })
        }
    }

    pub fn iter(self) -> std::ops::Range<usize> {
        let first = self.first();
        first..first + self.size()
    }

    /// Position of `index` in iteration order.
    pub fn offset(self, index: usize) -> usize {
        index - self.first()
    }

    pub fn kind_str(self) -> &'static str {
        match self {
            IndexSet::Finite { .. } => "finite",
            IndexSet::Sequence { .. } => "sequence",
        }
    }
}

/// Lebesgue exponent: a finite value `p >= 1` or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Finite exponent; rejects values below 1 and non-finite values.
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::InvalidExponent(format!("{p}")))
        }
    }

    /// Parses `"inf"` (case-insensitive) or a finite value `>= 1`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Exponent::Infinity);
        }
        match s.parse::<f64>() {
            Ok(p) => Exponent::finite(p),
            Err(_) => Err(Error::InvalidExponent(s.to_string())),
        }
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn is_one(self) -> bool {
        matches!(self, Exponent::Finite(p) if p == 1.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Index set together with strictly positive weights (counting by default).
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpace {
    indices: IndexSet,
    weights: Option<Vec<f64>>,
}

impl MeasureSpace {
    /// Counting measure: every index has weight 1.
    pub fn counting(indices: IndexSet) -> Self {
        MeasureSpace {
            indices,
            weights: None,
        }
    }

    /// Explicit weights, one per index in iteration order; all must be
    /// positive and finite.
    pub fn weighted(indices: IndexSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != indices.size() {
            return Err(Error::DimensionMismatch {
                expected: indices.size(),
                found: weights.len(),
            });
        }
        for (pos, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight {
                    index: indices.first() + pos,
                    value: w,
                });
            }
        }
        Ok(MeasureSpace {
            indices,
            weights: Some(weights),
        })
    }

    pub fn indices(&self) -> IndexSet {
        self.indices
    }

    pub fn size(&self) -> usize {
        self.indices.size()
    }

    pub fn is_counting(&self) -> bool {
        self.weights.is_none()
    }

    /// Weight of an index the caller already knows to be in range.
    pub fn weight(&self, index: usize) -> f64 {
        match &self.weights {
            None => 1.0,
            Some(w) => w[self.indices.offset(index)],
        }
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }
}

/// Total weight of a finite subset of indices.
pub fn measure_of(space: &MeasureSpace, subset: &BTreeSet<usize>) -> Result<f64> {
    let mut total = 0.0;
    for &index in subset {
        space.indices().check(index)?;
        total += space.weight(index);
    }
    Ok(total)
}

/// Sparse vector over an index set; only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    indices: IndexSet,
    entries: BTreeMap<usize, Scalar>,
}

impl Vector {
    /// Builds a vector, validating indices and scalar finiteness and dropping
    /// exact zeros.
    pub fn new(indices: IndexSet, entries: impl IntoIterator<Item = (usize, Scalar)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (index, value) in entries {
            indices.check(index)?;
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::NonFiniteScalar { index });
            }
            if value != Scalar::ZERO {
                map.insert(index, value);
            }
        }
        Ok(Vector {
            indices,
            entries: map,
        })
    }

    pub fn zero(indices: IndexSet) -> Self {
        Vector {
            indices,
            entries: BTreeMap::new(),
        }
    }

    /// Standard basis vector `e_index`.
    pub fn basis(indices: IndexSet, index: usize) -> Result<Self> {
        Vector::new(indices, [(index, Scalar::ONE)])
    }

    /// Dense real coordinates over `{0, ..., len-1}`.
    pub fn from_dense_real(coords: &[f64]) -> Self {
        let indices = IndexSet::finite(coords.len());
        let entries = coords
            .iter()
            .enumerate()
            .map(|(i, &x)| (i, Scalar::new(x, 0.0)));
        Vector::new(indices, entries).expect("dense coordinates are in range")
    }

    /// Dense complex coordinates over `{0, ..., len-1}`.
    pub fn from_dense(coords: &[Scalar]) -> Self {
        let indices = IndexSet::finite(coords.len());
        let entries = coords.iter().enumerate().map(|(i, &x)| (i, x));
        Vector::new(indices, entries).expect("dense coordinates are in range")
    }

    pub fn indices(&self) -> IndexSet {
        self.indices
    }

    pub fn get(&self, index: usize) -> Scalar {
        self.entries.get(&index).copied().unwrap_or(Scalar::ZERO)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, Scalar)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `real` when every stored entry has zero imaginary part.
    pub fn field(&self) -> Field {
        if self.entries.values().all(|v| v.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        }
    }

    pub fn scaled(&self, c: Scalar) -> Self {
        let entries = self.entries().map(|(i, v)| (i, v * c));
        Vector::new(self.indices, entries).expect("scaling preserves index range")
    }

    pub fn sub(&self, other: &Vector) -> Result<Self> {
        if self.indices != other.indices {
            return Err(Error::IndexSetMismatch);
        }
        let mut entries = self.entries.clone();
        for (i, v) in other.entries() {
            let cell = entries.entry(i).or_insert(Scalar::ZERO);
            *cell -= v;
            if *cell == Scalar::ZERO {
                entries.remove(&i);
            }
        }
        Ok(Vector {
            indices: self.indices,
            entries,
        })
    }

    pub fn add(&self, other: &Vector) -> Result<Self> {
        self.sub(&other.scaled(Scalar::new(-1.0, 0.0)))
    }

    /// Euclidean norm, used for witness normalization.
    pub fn l2_norm(&self) -> f64 {
        self.entries
            .values()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// JSON form `{"dim": n, "entries": [[index, re, im], ...]}`; the `im`
    /// component is omitted when every entry is real.
    pub fn to_json(&self) -> Value {
        let complex = self.field() == Field::Complex;
        let entries: Vec<Value> = self
            .entries()
            .map(|(i, v)| {
                if complex {
                    json!([i, v.re, v.im])
                } else {
                    json!([i, v.re])
                }
            })
            .collect();
        json!({ "dim": self.indices.size(), "entries": entries })
    }

    /// Parses the JSON form against an expected index set.
    pub fn from_json(value: &Value, indices: IndexSet) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Json("vector must be an object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("vector needs an integer \"dim\"".into()))? as usize;
        if dim != indices.size() {
            return Err(Error::DimensionMismatch {
                expected: indices.size(),
                found: dim,
            });
        }
        let raw = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("vector needs an \"entries\" array".into()))?;
        let mut entries = Vec::with_capacity(raw.len());
        for item in raw {
            let parts = item
                .as_array()
                .ok_or_else(|| Error::Json("vector entry must be an array".into()))?;
            if parts.len() != 2 && parts.len() != 3 {
                return Err(Error::Json(
                    "vector entry must be [index, re] or [index, re, im]".into(),
                ));
            }
            let index = parts[0]
                .as_u64()
                .ok_or_else(|| Error::Json("entry index must be a non-negative integer".into()))?
                as usize;
            let re = parts[1]
                .as_f64()
                .ok_or_else(|| Error::Json("entry re must be a number".into()))?;
            let im = if parts.len() == 3 {
                parts[2]
                    .as_f64()
                    .ok_or_else(|| Error::Json("entry im must be a number".into()))?
            } else {
                0.0
            };
            entries.push((index, Scalar::new(re, im)));
        }
        Vector::new(indices, entries)
    }
}

/// Weighted lp norm of a vector over a measure space; `p = inf` is the plain
/// supremum of entry moduli (weights are ignored there).
pub fn lp_norm(v: &Vector, p: Exponent, space: &MeasureSpace) -> Result<f64> {
    if v.indices() != space.indices() {
        return Err(Error::IndexSetMismatch);
    }
    Ok(norm_of_entries(v.entries(), p, space))
}

pub(crate) fn norm_of_entries(
    entries: impl Iterator<Item = (usize, Scalar)>,
    p: Exponent,
    space: &MeasureSpace,
) -> f64 {
    match p {
        Exponent::Infinity => entries.map(|(_, v)| v.norm()).fold(0.0, f64::max),
        Exponent::Finite(p) if p == 1.0 => entries.map(|(i, v)| space.weight(i) * v.norm()).sum(),
        Exponent::Finite(p) if p == 2.0 => entries
            .map(|(i, v)| space.weight(i) * v.norm_sqr())
            .sum::<f64>()
            .sqrt(),
        Exponent::Finite(p) => entries
            .map(|(i, v)| space.weight(i) * v.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}
