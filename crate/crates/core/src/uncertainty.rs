//! Support-size bounds for pairs of reconstructing systems.
//!
//! For a pair of systems (f with synthesis omega, g with synthesis tau) and a
//! nonzero vector x, the measures of the analysis supports cannot both be
//! small: their product is at least the inverse product of the two cross
//! coherences. Related checks cover the one-sided bounds, the mixed-norm
//! variants for 1 < p < infinity, the norm-transfer inequalities behind the
//! product bound, and the classical Hilbert-space chain for Parseval frames.
//!
//! Every checker returns a [`BoundReport`] rather than asserting, so callers
//! can log slacks, count equality cases, and treat violations as data.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frames::{analyze, diagonal_weight, FrameSystem, Repr};
use crate::generators::validate_parseval;
use crate::spaces::{measure_of, Exponent, Scalar, Vector};

/// Slack below this (negative) margin counts as a violation.
pub const CHECK_TOL: f64 = 1e-12;
/// Slack within `EQUALITY_TOL * max(1, rhs)` of zero counts as equality.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Parseval deviation allowed before the Hilbert chain refuses to run.
pub const PARSEVAL_TOL: f64 = 1e-9;

/// Which cross evaluation to take: functionals of one system applied to the
/// synthesis vectors of the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `f_alpha` applied to the omega vectors (synthesis vectors of g).
    FOfOmega,
    /// `g_beta` applied to the tau vectors (synthesis vectors of f).
    GOfTau,
}

/// Cross-evaluation table between two systems.
#[derive(Clone, Debug, PartialEq)]
pub enum CrossGram {
    /// Full table; `entries[r][c]` is functional `r` applied to vector `c`.
    Dense { entries: Vec<Vec<Scalar>> },
    /// Diagonal table (diagonal systems evaluate to zero off the diagonal);
    /// entry `k` belongs to the `k`-th index of the shared index set.
    Diagonal { entries: Vec<Scalar> },
}

impl CrossGram {
    /// Largest modulus over the table; zero for an empty table.
    pub fn max_modulus(&self) -> f64 {
        match self {
            CrossGram::Dense { entries } => entries
                .iter()
                .flatten()
                .map(|v| v.norm())
                .fold(0.0, f64::max),
            CrossGram::Diagonal { entries } => {
                entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// Moduli rows, materialized dense (diagonal tables expand with zeros).
    pub fn modulus_rows(&self) -> Vec<Vec<f64>> {
        match self {
            CrossGram::Dense { entries } => entries
                .iter()
                .map(|row| row.iter().map(|v| v.norm()).collect())
                .collect(),
            CrossGram::Diagonal { entries } => {
                let n = entries.len();
                (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| if r == c { entries[r].norm() } else { 0.0 })
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

/// Support of a coefficient function together with its measure.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportReport {
    pub support: BTreeSet<usize>,
    pub cardinality: usize,
    /// Measure of the support in the system's measure space.
    pub measure: f64,
    /// Relative tolerance that produced the support.
    pub tolerance: f64,
}

/// Identifies which inequality a report refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundId {
    Product1,
    ProductInf,
    MixedP,
    OneSided1,
    OneSidedInf,
    HilbertChain,
    TransferFI,
    TransferSI,
    TransferI1,
    TransferI2,
}

impl BoundId {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundId::Product1 => "product_1",
            BoundId::ProductInf => "product_inf",
            BoundId::MixedP => "mixed_p",
            BoundId::OneSided1 => "one_sided_1",
            BoundId::OneSidedInf => "one_sided_inf",
            BoundId::HilbertChain => "hilbert_chain",
            BoundId::TransferFI => "transfer_FI",
            BoundId::TransferSI => "transfer_SI",
            BoundId::TransferI1 => "transfer_I1",
            BoundId::TransferI2 => "transfer_I2",
        }
    }
}

/// One checked inequality, oriented so `lhs >= rhs` is the claim.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub id: BoundId,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`; negative infinity when the bound itself is infinite.
    pub slack: f64,
    pub holds: bool,
    pub equality: bool,
    /// False when a zero coherence makes the right side infinite.
    pub bound_finite: bool,
    /// Conjugate exponent, recorded for the mixed-norm bound only.
    pub q: Option<f64>,
}

impl BoundReport {
    fn from_sides(id: BoundId, lhs: f64, rhs: f64, q: Option<f64>) -> Self {
        if rhs.is_finite() {
            let slack = lhs - rhs;
            BoundReport {
                id,
                lhs,
                rhs,
                slack,
                holds: slack >= -CHECK_TOL,
                equality: slack.abs() <= EQUALITY_TOL * rhs.abs().max(1.0),
                bound_finite: true,
                q,
            }
        } else {
            BoundReport {
                id,
                lhs,
                rhs: f64::INFINITY,
                slack: f64::NEG_INFINITY,
                holds: false,
                equality: false,
                bound_finite: false,
                q,
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let num = |v: f64| -> Value {
            if v == f64::INFINITY {
                json!("inf")
            } else if v == f64::NEG_INFINITY {
                json!("-inf")
            } else {
                json!(v)
            }
        };
        let mut obj = json!({
            "id": self.id.as_str(),
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "slack": num(self.slack),
            "holds": self.holds,
            "equality": self.equality,
        });
        if !self.bound_finite {
            obj["bound_finite"] = json!(false);
        }
        if let Some(q) = self.q {
            obj["q"] = json!(q);
        }
        obj
    }
}

/// The three-link chain for a pair of Parseval frames in a Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertChain {
    /// Support count of the analysis of `h` by the tau frame.
    pub count_tau: usize,
    /// Support count of the analysis of `h` by the omega frame.
    pub count_omega: usize,
    /// Squared arithmetic mean of the two counts.
    pub am_square: f64,
    /// Main link: product of counts against the inverse squared coherence.
    pub report: BoundReport,
    /// Whether the arithmetic-geometric link is tight (counts equal).
    pub amgm_equality: bool,
    /// Whether the outer link (mean squared vs coherence bound) is tight.
    pub end_equality: bool,
}

fn require_compatible(f: &FrameSystem, g: &FrameSystem) -> Result<()> {
    if f.ambient() != g.ambient() {
        return Err(Error::IndexSetMismatch);
    }
    Ok(())
}

/// Cross-evaluation table of one system's functionals on the other's
/// synthesis vectors. Both systems must share the ambient index set and the
/// representation kind.
pub fn cross_gram(f: &FrameSystem, g: &FrameSystem, direction: Direction) -> Result<CrossGram> {
    require_compatible(f, g)?;
    let (func_sys, vec_sys) = match direction {
        Direction::FOfOmega => (f, g),
        Direction::GOfTau => (g, f),
    };
    match (func_sys.repr(), vec_sys.repr()) {
        (
            Repr::Dense { analysis, .. },
            Repr::Dense {
                synthesis: vectors, ..
            },
        ) => {
            let entries: Vec<Vec<Scalar>> = analysis
                .iter()
                .map(|row| {
                    vectors
                        .iter()
                        .map(|tau| row.iter().zip(tau).map(|(a, b)| a * b).sum())
                        .collect()
                })
                .collect();
            Ok(CrossGram::Dense { entries })
        }
        (Repr::Diagonal { rate: rf }, Repr::Diagonal { rate: rg }) => {
            let entries: Vec<Scalar> = func_sys
                .space()
                .indices()
                .iter()
                .map(|n| Scalar::new(diagonal_weight(*rf, n) / diagonal_weight(*rg, n), 0.0))
                .collect();
            Ok(CrossGram::Diagonal { entries })
        }
        _ => Err(Error::UnsupportedRepresentation {
            operation: "cross_gram",
            required: "matching (both dense or both diagonal)",
        }),
    }
}

/// Largest cross-evaluation modulus in the given direction.
pub fn coherence(f: &FrameSystem, g: &FrameSystem, direction: Direction) -> Result<f64> {
    Ok(cross_gram(f, g, direction)?.max_modulus())
}

/// Support of a coefficient function with its measure in `sys`'s space.
pub fn support_of(sys: &FrameSystem, x: &Vector, tol: f64) -> Result<SupportReport> {
    let coeffs = analyze(sys, x, tol)?;
    let support = coeffs.support();
    let measure = measure_of(sys.space(), &support)?;
    Ok(SupportReport {
        cardinality: support.len(),
        support,
        measure,
        tolerance: tol,
    })
}

struct PairData {
    mu_support: f64,
    nu_support: f64,
    coherence_f_omega: f64,
    coherence_g_tau: f64,
}

fn pair_data(f: &FrameSystem, g: &FrameSystem, x: &Vector, tol: f64) -> Result<PairData> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    require_compatible(f, g)?;
    let support_f = support_of(f, x, tol)?;
    let support_g = support_of(g, x, tol)?;
    Ok(PairData {
        mu_support: support_f.measure,
        nu_support: support_g.measure,
        coherence_f_omega: coherence(f, g, Direction::FOfOmega)?,
        coherence_g_tau: coherence(f, g, Direction::GOfTau)?,
    })
}

fn inverse_or_inf(value: f64) -> f64 {
    if value > 0.0 {
        1.0 / value
    } else {
        f64::INFINITY
    }
}

fn endpoint_id(p: Exponent, at_one: BoundId, at_inf: BoundId) -> Result<BoundId> {
    if p.is_one() {
        Ok(at_one)
    } else if p.is_infinite() {
        Ok(at_inf)
    } else {
        Err(Error::InvalidExponent(format!(
            "this bound is stated for p = 1 or p = inf, got {p}"
        )))
    }
}

/// Product bound at the endpoint exponents: the product of the two support
/// measures is at least the inverse product of the cross coherences.
pub fn check_product_bound(
    f: &FrameSystem,
    g: &FrameSystem,
    x: &Vector,
    p: Exponent,
    tol: f64,
) -> Result<BoundReport> {
    let id = endpoint_id(p, BoundId::Product1, BoundId::ProductInf)?;
    let d = pair_data(f, g, x, tol)?;
    let lhs = d.mu_support * d.nu_support;
    let rhs = inverse_or_inf(d.coherence_f_omega * d.coherence_g_tau);
    Ok(BoundReport::from_sides(id, lhs, rhs, None))
}

/// One-sided bounds at the endpoints. At p = 1 the f-side support measure is
/// bounded by the f-on-omega coherence and the g-side by the g-on-tau one;
/// at p = inf the coherences swap sides.
pub fn check_one_sided_bounds(
    f: &FrameSystem,
    g: &FrameSystem,
    x: &Vector,
    p: Exponent,
    tol: f64,
) -> Result<(BoundReport, BoundReport)> {
    let id = endpoint_id(p, BoundId::OneSided1, BoundId::OneSidedInf)?;
    let d = pair_data(f, g, x, tol)?;
    let (rhs_mu, rhs_nu) = if p.is_one() {
        (
            inverse_or_inf(d.coherence_f_omega),
            inverse_or_inf(d.coherence_g_tau),
        )
    } else {
        (
            inverse_or_inf(d.coherence_g_tau),
            inverse_or_inf(d.coherence_f_omega),
        )
    };
    Ok((
        BoundReport::from_sides(id, d.mu_support, rhs_mu, None),
        BoundReport::from_sides(id, d.nu_support, rhs_nu, None),
    ))
}

/// Mixed-norm bound for 1 < p < infinity with conjugate q: the supports
/// enter with exponents 1/p and 1/q, against each single coherence.
pub fn check_mixed_norm_bound(
    f: &FrameSystem,
    g: &FrameSystem,
    x: &Vector,
    p: Exponent,
    tol: f64,
) -> Result<(BoundReport, BoundReport)> {
    let pv = match p {
        Exponent::Finite(v) if v > 1.0 => v,
        _ => {
            return Err(Error::InvalidExponent(format!(
                "mixed-norm bound needs 1 < p < inf, got {p}"
            )))
        }
    };
    if !f.is_dense() || !g.is_dense() {
        return Err(Error::UnsupportedRepresentation {
            operation: "check_mixed_norm_bound",
            required: "dense",
        });
    }
    let q = pv / (pv - 1.0);
    let d = pair_data(f, g, x, tol)?;
    let first = BoundReport::from_sides(
        BoundId::MixedP,
        d.mu_support.powf(1.0 / pv) * d.nu_support.powf(1.0 / q),
        inverse_or_inf(d.coherence_f_omega),
        Some(q),
    );
    let second = BoundReport::from_sides(
        BoundId::MixedP,
        d.nu_support.powf(1.0 / pv) * d.mu_support.powf(1.0 / q),
        inverse_or_inf(d.coherence_g_tau),
        Some(q),
    );
    Ok((first, second))
}

/// The two norm-transfer inequalities behind the product bound. At p = 1
/// each system's 1-norm transfers to the other through its support measure
/// and coherence; at p = inf the sup norm of one side is controlled by the
/// 1-norm of the other.
pub fn check_transfer_inequalities(
    f: &FrameSystem,
    g: &FrameSystem,
    x: &Vector,
    p: Exponent,
    tol: f64,
) -> Result<(BoundReport, BoundReport)> {
    endpoint_id(p, BoundId::TransferFI, BoundId::TransferI1)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    require_compatible(f, g)?;
    let support_f = support_of(f, x, tol)?;
    let support_g = support_of(g, x, tol)?;
    let coeff_f = analyze(f, x, tol)?;
    let coeff_g = analyze(g, x, tol)?;
    let one = Exponent::Finite(1.0);
    let c_f_omega = coherence(f, g, Direction::FOfOmega)?;
    let c_g_tau = coherence(f, g, Direction::GOfTau)?;
    if p.is_one() {
        let fi = BoundReport::from_sides(
            BoundId::TransferFI,
            support_f.measure * coeff_g.norm(one),
            coeff_f.norm(one) * inverse_or_inf(c_f_omega),
            None,
        );
        let si = BoundReport::from_sides(
            BoundId::TransferSI,
            support_g.measure * coeff_f.norm(one),
            coeff_g.norm(one) * inverse_or_inf(c_g_tau),
            None,
        );
        Ok((fi, si))
    } else {
        let sup = Exponent::Infinity;
        let i1 = BoundReport::from_sides(
            BoundId::TransferI1,
            support_g.measure * coeff_g.norm(one),
            coeff_f.norm(sup) * inverse_or_inf(c_f_omega),
            None,
        );
        let i2 = BoundReport::from_sides(
            BoundId::TransferI2,
            support_f.measure * coeff_f.norm(one),
            coeff_g.norm(sup) * inverse_or_inf(c_g_tau),
            None,
        );
        Ok((i1, i2))
    }
}

/// Hilbert-space chain for two Parseval frames: the product of the two
/// analysis support counts of `h` dominates the inverse squared coherence,
/// and the squared mean of the counts dominates the product. Refuses to run
/// when either frame misses Parseval by more than [`PARSEVAL_TOL`].
pub fn check_hilbert_chain(
    tau_sys: &FrameSystem,
    omega_sys: &FrameSystem,
    h: &Vector,
    tol: f64,
) -> Result<HilbertChain> {
    if h.is_zero() {
        return Err(Error::ZeroVector);
    }
    require_compatible(tau_sys, omega_sys)?;
    for (name, sys) in [("tau", tau_sys), ("omega", omega_sys)] {
        let report = validate_parseval(sys, PARSEVAL_TOL)?;
        if !report.holds {
            return Err(Error::NotParseval {
                which: name.to_string(),
                deviation: report.deviation,
            });
        }
    }
    let count_tau = support_of(tau_sys, h, tol)?.cardinality;
    let count_omega = support_of(omega_sys, h, tol)?.cardinality;
    let coh = coherence(tau_sys, omega_sys, Direction::FOfOmega)?;
    let rhs = if coh > 0.0 {
        1.0 / (coh * coh)
    } else {
        f64::INFINITY
    };
    let product = (count_tau as f64) * (count_omega as f64);
    let report = BoundReport::from_sides(BoundId::HilbertChain, product, rhs, None);
    let mean = (count_tau as f64 + count_omega as f64) / 2.0;
    let am_square = mean * mean;
    let end_slack = am_square - rhs;
    Ok(HilbertChain {
        count_tau,
        count_omega,
        am_square,
        amgm_equality: count_tau == count_omega,
        end_equality: rhs.is_finite() && end_slack.abs() <= EQUALITY_TOL * rhs.abs().max(1.0),
        report,
    })
}
