//! The s-Frobenius number F_s(a): the largest integer with fewer than `s`
//! representations as a non-negative integer combination of the entries.
//!
//! Three independent routes are provided and must agree: the closed form for
//! two entries, a residue-class (Apéry-style) scan, and a naive downward scan.
//! When every non-negative integer has at least `s` representations the value
//! is `-1`.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::denumerant::{build_table, DenumerantTable, Limits};
use crate::error::{Error, Result};
use crate::instance::{InputVector, Multiplicity};
use crate::par::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    ClosedForm2,
    Apery,
    NaiveScan,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" | "closed-form" => Ok(Method::ClosedForm2),
            "apery" => Ok(Method::Apery),
            "naive" => Ok(Method::NaiveScan),
            other => Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusResult {
    pub value: i128,
    pub method: Method,
    /// Table limit consumed by the computation (0 for the closed form).
    pub search_bound_used: i128,
}

/// `s * a_1 * a_2 - a_1 - a_2`, valid for coprime pairs.
pub fn frobenius_two_closed(a: &InputVector, s: Multiplicity) -> Result<FrobeniusResult> {
    if a.n() != 2 {
        return Err(Error::InvalidConfig(format!(
            "closed form needs exactly two entries, got {}",
            a.n()
        )));
    }
    let (a1, a2) = (a.entries()[0], a.entries()[1]);
    let what = "two-entry closed form";
    let prod = arith::mul(arith::mul(s.as_i128(), a1, what)?, a2, what)?;
    let value = arith::sub(prod, arith::add(a1, a2, what)?, what)?;
    Ok(FrobeniusResult {
        value,
        method: Method::ClosedForm2,
        search_bound_used: 0,
    })
}

/// Upper bound on the classical Frobenius number used to seed [`search_bound`].
///
/// Two entries use the exact closed form. Otherwise `a_min * a_max`, raised
/// to the Erdős–Graham bound when that applies and is larger.
fn classical_upper(a: &InputVector) -> Result<i128> {
    if a.n() == 2 {
        return Ok(frobenius_two_closed(a, Multiplicity::ONE)?.value);
    }
    let fallback = arith::mul(a.min(), a.max(), "classical Frobenius bound")?;
    Ok(match crate::bounds::erdos_graham(a)? {
        Some(eg) => eg.max(fallback),
        None => fallback,
    })
}

/// A table limit `B` with `B >= F_s(a) + max(a)`.
///
/// `B = U_1 + ceil(((s-1) (n-1)! a_1...a_n)^(1/(n-1))) + max(a)` where `U_1`
/// bounds the classical Frobenius number. The root is evaluated exactly.
pub fn search_bound(a: &InputVector, s: Multiplicity) -> Result<i128> {
    let what = "search bound";
    let u1 = classical_upper(a)?;
    let radicand = arith::mul(s.as_i128() - 1, a.scaled_product()?, what)?;
    let root = arith::ceil_root(radicand, a.n() as u32 - 1);
    let b = arith::add(arith::add(u1, root, what)?, a.max(), what)?;
    Ok(b.max(0))
}

fn table_for(a: &InputVector, s: Multiplicity, limits: &Limits) -> Result<(i128, DenumerantTable)> {
    let bound = search_bound(a, s)?;
    let table = build_table(a.entries(), bound, s, limits)?;
    Ok((bound, table))
}

/// Smallest `t ≡ residue (mod step)` with at least `s` representations.
fn first_full(counts: &[u32], s: u32, residue: usize, step: usize) -> Option<usize> {
    (residue..counts.len()).step_by(step).find(|&t| counts[t] >= s)
}

/// Residue-class method: with `q = min(a)`, saturated counts are monotone
/// along steps of `q`, so each class mod `q` becomes fully represented from
/// some first value `m(r)` on, and `F_s = max_r m(r) - q`.
pub fn frobenius_apery(
    a: &InputVector,
    s: Multiplicity,
    limits: &Limits,
    exec: Execution,
) -> Result<FrobeniusResult> {
    let (bound, table) = table_for(a, s, limits)?;
    let q = a.min() as usize;
    let counts = table.counts();
    let firsts = par::try_map_indexed(q, exec, |r| {
        first_full(counts, s.get(), r, q).ok_or(Error::InternalBoundViolation {
            residue: r as i128,
            bound,
        })
    })?;
    let top = *firsts.iter().max().expect("q >= 1") as i128;
    Ok(FrobeniusResult {
        value: top - q as i128,
        method: Method::Apery,
        search_bound_used: bound,
    })
}

/// Scan downward from the search bound for the first value with fewer than
/// `s` representations.
///
/// The top `min(a)` table entries must all be fully represented; that
/// certifies every larger value is as well.
pub fn frobenius_naive(a: &InputVector, s: Multiplicity, limits: &Limits) -> Result<FrobeniusResult> {
    let (bound, table) = table_for(a, s, limits)?;
    let counts = table.counts();
    let q = a.min() as usize;
    if let Some(t) = (counts.len() - q..counts.len()).find(|&t| counts[t] < s.get()) {
        return Err(Error::InternalBoundViolation {
            residue: (t % q) as i128,
            bound,
        });
    }
    let value = counts
        .iter()
        .rposition(|&c| c < s.get())
        .map_or(-1, |b| b as i128);
    Ok(FrobeniusResult {
        value,
        method: Method::NaiveScan,
        search_bound_used: bound,
    })
}

/// F_s(a) by the requested method.
pub fn compute(
    a: &InputVector,
    s: Multiplicity,
    method: Method,
    limits: &Limits,
) -> Result<FrobeniusResult> {
    match method {
        Method::ClosedForm2 => frobenius_two_closed(a, s),
        Method::Apery => frobenius_apery(a, s, limits, Execution::default()),
        Method::NaiveScan => frobenius_naive(a, s, limits),
    }
}

/// F_s(a) by the residue-class method, run sequentially.
pub fn frobenius(a: &InputVector, s: Multiplicity, limits: &Limits) -> Result<i128> {
    Ok(frobenius_apery(a, s, limits, Execution::Sequential)?.value)
}
