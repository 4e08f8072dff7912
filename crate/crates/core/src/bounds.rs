//! Exact checks of the known bounds on F_s(a) and on the covering radius.
//!
//! Every inequality with a fractional exponent `1/d` (with `d = n - 1`) is
//! rearranged so that both sides are non-negative and then raised to the
//! `d`-th power, so each verdict is an exact integer comparison `lhs ≤ rhs`
//! (or `lhs < rhs`).

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::denumerant::Limits;
use crate::error::{Error, Result};
use crate::frobenius::frobenius;
use crate::instance::{InputVector, Multiplicity};
use crate::lattice::{det_over_volume, integral_covering_radius, successive_minima};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `F_s >= (s (n-1)! Πa)^(1/(n-1)) - Σa`.
    TheoremMainLower,
    /// `F_s <= F_1 + ((s-1) (n-1)! Πa)^(1/(n-1))`.
    TheoremMainUpper,
    /// `μ_s >= (s det/vol)^(1/d)` on the lattice side.
    CoveringLower,
    /// `μ_s <= μ_1 + ((s-1) det/vol)^(1/d)` on the lattice side.
    CoveringUpper,
    /// `μ_s <= (1 + (d!^(1/d)/d)(s-1)^(1/d)) Σλ_i`.
    MinimaUpper,
    /// `((n-1)! Πa)^(1/(n-1)) - Σa < F_1`.
    ClassicalLower,
    /// `F_1 <= 2 a_{n-1} floor(a_n/n) - a_n` for sorted distinct entries.
    ClassicalUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    LessOrEqual,
    Less,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    Inconclusive,
    NotApplicable,
}

/// One exact bound check, read as `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: BoundKind,
    pub a: InputVector,
    pub s: Multiplicity,
    pub relation: Relation,
    pub lhs: Option<i128>,
    pub rhs: Option<i128>,
    pub status: Status,
    pub applicable: bool,
    pub holds: bool,
    /// `lhs == rhs`: the bound is attained.
    pub equality: bool,
    pub note: Option<String>,
}

impl BoundReport {
    fn compare(
        bound: BoundKind,
        a: &InputVector,
        s: Multiplicity,
        relation: Relation,
        lhs: i128,
        rhs: i128,
    ) -> Self {
        let holds = match relation {
            Relation::LessOrEqual => lhs <= rhs,
            Relation::Less => lhs < rhs,
        };
        Self {
            bound,
            a: a.clone(),
            s,
            relation,
            lhs: Some(lhs),
            rhs: Some(rhs),
            status: if holds { Status::Holds } else { Status::Violated },
            applicable: true,
            holds,
            equality: lhs == rhs,
            note: None,
        }
    }

    fn without_verdict(
        bound: BoundKind,
        a: &InputVector,
        s: Multiplicity,
        relation: Relation,
        status: Status,
        note: String,
    ) -> Self {
        Self {
            bound,
            a: a.clone(),
            s,
            relation,
            lhs: None,
            rhs: None,
            status,
            applicable: status != Status::NotApplicable,
            holds: false,
            equality: false,
            note: Some(note),
        }
    }

    pub fn is_violated(&self) -> bool {
        self.status == Status::Violated
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn dim(a: &InputVector) -> u32 {
    a.n() as u32 - 1
}

fn positive_part_pow(x: i128, d: u32, what: &'static str) -> Result<i128> {
    arith::pow(x.max(0), d, what)
}

/// Lower bound of the main theorem given `F_s`:
/// `s (n-1)! Πa <= (F_s + Σa)^(n-1)`.
pub fn theorem_main_lower_from(a: &InputVector, s: Multiplicity, f_s: i128) -> Result<BoundReport> {
    let what = "main lower bound";
    let lhs = arith::mul(s.as_i128(), a.scaled_product()?, what)?;
    let shifted = arith::add(f_s, a.sum()?, what)?;
    let rhs = positive_part_pow(shifted, dim(a), what)?;
    Ok(BoundReport::compare(
        BoundKind::TheoremMainLower,
        a,
        s,
        Relation::LessOrEqual,
        lhs,
        rhs,
    ))
}

/// Upper bound of the main theorem given `F_s` and `F_1`:
/// `max(F_s - F_1, 0)^(n-1) <= (s-1) (n-1)! Πa`.
pub fn theorem_main_upper_from(
    a: &InputVector,
    s: Multiplicity,
    f_s: i128,
    f_1: i128,
) -> Result<BoundReport> {
    let what = "main upper bound";
    let gap = arith::sub(f_s, f_1, what)?;
    let lhs = positive_part_pow(gap, dim(a), what)?;
    let rhs = arith::mul(s.as_i128() - 1, a.scaled_product()?, what)?;
    Ok(BoundReport::compare(
        BoundKind::TheoremMainUpper,
        a,
        s,
        Relation::LessOrEqual,
        lhs,
        rhs,
    ))
}

pub fn theorem_main_lower(a: &InputVector, s: Multiplicity, limits: &Limits) -> Result<BoundReport> {
    theorem_main_lower_from(a, s, frobenius(a, s, limits)?)
}

pub fn theorem_main_upper(a: &InputVector, s: Multiplicity, limits: &Limits) -> Result<BoundReport> {
    let f_s = frobenius(a, s, limits)?;
    let f_1 = frobenius(a, Multiplicity::ONE, limits)?;
    theorem_main_upper_from(a, s, f_s, f_1)
}

/// `det(Λ_a) / vol(S_a)` as an integer.
fn lattice_ratio(a: &InputVector) -> Result<i128> {
    let r = det_over_volume(a)?;
    assert!(r.is_integer(), "det/vol is always integral");
    Ok(r.to_integer())
}

/// `μ_s(S_a, Λ_a)` by the lattice route: the integral radius plus
/// `a_1 + ... + a_{n-1}`.
pub fn covering_radius_lattice_route(
    a: &InputVector,
    s: Multiplicity,
    limits: &Limits,
) -> Result<i128> {
    let integral = integral_covering_radius(a, s, limits, Execution::Sequential)?.value;
    let shift = arith::sum(a.prefix(), "covering radius shift")?;
    arith::add(integral, shift, "covering radius")
}

/// Both sides of the covering-radius sandwich in dimension `d = n - 1`,
/// evaluated on the lattice side (integral radius, lattice determinant and
/// simplex volume) rather than through F_s.
pub fn covering_sandwich(
    a: &InputVector,
    s: Multiplicity,
    limits: &Limits,
) -> Result<(BoundReport, BoundReport)> {
    let what = "covering radius sandwich";
    let d = dim(a);
    let ratio = lattice_ratio(a)?;
    let mu_s = covering_radius_lattice_route(a, s, limits)?;
    let mu_1 = covering_radius_lattice_route(a, Multiplicity::ONE, limits)?;

    let lower = BoundReport::compare(
        BoundKind::CoveringLower,
        a,
        s,
        Relation::LessOrEqual,
        arith::mul(s.as_i128(), ratio, what)?,
        positive_part_pow(mu_s, d, what)?,
    );
    let upper = BoundReport::compare(
        BoundKind::CoveringUpper,
        a,
        s,
        Relation::LessOrEqual,
        positive_part_pow(arith::sub(mu_s, mu_1, what)?, d, what)?,
        arith::mul(s.as_i128() - 1, ratio, what)?,
    );
    Ok((lower, upper))
}

/// Erdős–Graham: with distinct entries sorted ascending,
/// `F_1 <= 2 a_{n-1} floor(a_n / n) - a_n`. `None` when entries repeat.
pub fn erdos_graham(a: &InputVector) -> Result<Option<i128>> {
    if a.n() < 3 || a.has_repeated_entries() {
        return Ok(None);
    }
    let mut sorted = a.entries().to_vec();
    sorted.sort_unstable();
    let (second, top) = (sorted[a.n() - 2], sorted[a.n() - 1]);
    let what = "Erdős–Graham bound";
    let k = top / a.n() as i128;
    Ok(Some(arith::sub(arith::mul(arith::mul(2, second, what)?, k, what)?, top, what)?))
}

/// The classical pair for `n >= 3`, given `F_1`.
///
/// The upper bound is only reported for pairwise distinct entries.
pub fn classical_bounds_from(a: &InputVector, f_1: i128) -> Result<(BoundReport, BoundReport)> {
    if a.n() < 3 {
        return Err(Error::InvalidConfig(format!(
            "classical bounds need n >= 3, got n = {}",
            a.n()
        )));
    }
    let what = "classical bounds";
    let one = Multiplicity::ONE;
    let shifted = arith::add(f_1, a.sum()?, what)?;
    let lower = BoundReport::compare(
        BoundKind::ClassicalLower,
        a,
        one,
        Relation::Less,
        a.scaled_product()?,
        positive_part_pow(shifted, dim(a), what)?,
    );

    let upper = match erdos_graham(a)? {
        Some(rhs) => {
            BoundReport::compare(BoundKind::ClassicalUpper, a, one, Relation::LessOrEqual, f_1, rhs)
        }
        None => BoundReport::without_verdict(
            BoundKind::ClassicalUpper,
            a,
            one,
            Relation::LessOrEqual,
            Status::NotApplicable,
            "bound presumes pairwise distinct entries".to_string(),
        ),
    };
    Ok((lower, upper))
}

pub fn classical_bounds(a: &InputVector, limits: &Limits) -> Result<(BoundReport, BoundReport)> {
    classical_bounds_from(a, frobenius(a, Multiplicity::ONE, limits)?)
}

/// The successive-minima bound for `K = S_a`, `Λ = Λ_a` in dimension `d`.
///
/// `μ <= L (1 + (d! (s-1))^(1/d) / d)` with `L = Σλ_i` is equivalent to
/// `d (μ - L) <= L (d! (s-1))^(1/d)`, which holds outright when `μ <= L` and
/// otherwise clears to `(d (μ - L))^d <= L^d d! (s-1)`. Overflow while
/// clearing gives an inconclusive report.
pub fn minima_bound_from(
    a: &InputVector,
    s: Multiplicity,
    mu_s: i128,
    minima_sum: i128,
) -> BoundReport {
    let d = dim(a);
    let cleared = || -> Option<(i128, i128)> {
        let gap = (mu_s - minima_sum).max(0);
        let lhs = (d as i128).checked_mul(gap)?.checked_pow(d)?;
        let rhs = minima_sum
            .checked_pow(d)?
            .checked_mul(arith::factorial(d).ok()?)?
            .checked_mul(s.as_i128() - 1)?;
        Some((lhs, rhs))
    };
    match cleared() {
        Some((lhs, rhs)) => {
            let report =
                BoundReport::compare(BoundKind::MinimaUpper, a, s, Relation::LessOrEqual, lhs, rhs);
            if mu_s <= minima_sum {
                report.with_note("radius does not exceed the sum of minima")
            } else {
                report
            }
        }
        None => BoundReport::without_verdict(
            BoundKind::MinimaUpper,
            a,
            s,
            Relation::LessOrEqual,
            Status::Inconclusive,
            "cleared comparison overflows 128 bits".to_string(),
        ),
    }
}

/// Successive-minima bound with `μ_s` from F_s. Enumeration failures
/// propagate as errors.
pub fn proposition_minima_bound(
    a: &InputVector,
    s: Multiplicity,
    limits: &Limits,
) -> Result<BoundReport> {
    let minima = successive_minima(a, limits)?;
    minima_report(a, s, limits, &minima)
}

fn minima_report(
    a: &InputVector,
    s: Multiplicity,
    limits: &Limits,
    minima: &[crate::lattice::Rational],
) -> Result<BoundReport> {
    let sum = minima
        .iter()
        .try_fold(crate::lattice::Rational::from_integer(0), |acc, &x| {
            num_traits::CheckedAdd::checked_add(&acc, &x)
        })
        .ok_or(Error::ArithmeticOverflow("sum of successive minima"))?;
    assert!(sum.is_integer(), "gauges of integer vectors are integers");
    let mu_s = arith::add(frobenius(a, s, limits)?, a.sum()?, "covering radius")?;
    Ok(minima_bound_from(a, s, mu_s, sum.to_integer()))
}

/// Every applicable bound for one instance.
///
/// Order: main lower, main upper, covering lower, covering upper, minima,
/// then for `n >= 3` the classical lower and upper bounds. A minima
/// enumeration that runs out of budget yields an inconclusive report rather
/// than an error.
pub fn verify_instance(a: &InputVector, s: Multiplicity, limits: &Limits) -> Result<Vec<BoundReport>> {
    let f_s = frobenius(a, s, limits)?;
    let f_1 = frobenius(a, Multiplicity::ONE, limits)?;
    let mut reports = vec![
        theorem_main_lower_from(a, s, f_s)?,
        theorem_main_upper_from(a, s, f_s, f_1)?,
    ];
    let (lower, upper) = covering_sandwich(a, s, limits)?;
    reports.push(lower);
    reports.push(upper);
    reports.push(match successive_minima(a, limits) {
        Ok(minima) => minima_report(a, s, limits, &minima)?,
        Err(Error::ResourceLimit { budget, .. }) => BoundReport::without_verdict(
            BoundKind::MinimaUpper,
            a,
            s,
            Relation::LessOrEqual,
            Status::Inconclusive,
            format!("successive minima enumeration exceeded {budget} nodes"),
        ),
        Err(e) => return Err(e),
    });
    if a.n() >= 3 {
        let (lower, upper) = classical_bounds_from(a, f_1)?;
        reports.push(lower);
        reports.push(upper);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_instance;
    use proptest::prelude::*;

    fn inst(v: &[i128], s: i128) -> (InputVector, Multiplicity) {
        validate_instance(v, s).unwrap()
    }

    #[test]
    fn main_lower_examples() {
        let l = Limits::default();
        let (a, s) = inst(&[3, 5], 1);
        let r = theorem_main_lower(&a, s, &l).unwrap();
        assert!(r.holds && r.equality);
        assert_eq!((r.lhs, r.rhs), (Some(15), Some(15)));

        let (a, s) = inst(&[3, 5, 7], 1);
        let r = theorem_main_lower(&a, s, &l).unwrap();
        assert_eq!((r.lhs, r.rhs), (Some(210), Some(361)));
        assert!(r.holds && !r.equality);

        let (a, s) = inst(&[3, 5, 7], 2);
        let r = theorem_main_lower(&a, s, &l).unwrap();
        assert_eq!(r.lhs, Some(420));
        assert!(r.holds);
    }

    #[test]
    fn main_upper_examples() {
        let l = Limits::default();
        let (a, s) = inst(&[3, 5], 2);
        let r = theorem_main_upper(&a, s, &l).unwrap();
        assert_eq!((r.lhs, r.rhs), (Some(15), Some(15)));
        assert!(r.holds && r.equality);

        let (a, s) = inst(&[4, 9, 11], 1);
        let r = theorem_main_upper(&a, s, &l).unwrap();
        assert_eq!((r.lhs, r.rhs), (Some(0), Some(0)));
        assert!(r.holds);

        let (a, s) = inst(&[3, 5, 7], 2);
        let r = theorem_main_upper(&a, s, &l).unwrap();
        assert_eq!(r.rhs, Some(210));
        assert!(r.holds);
    }

    #[test]
    fn classical_examples() {
        let l = Limits::default();
        let (a, _) = inst(&[3, 5, 7], 1);
        let (lower, upper) = classical_bounds(&a, &l).unwrap();
        assert_eq!((upper.lhs, upper.rhs), (Some(4), Some(13)));
        assert!(upper.holds);
        assert_eq!((lower.lhs, lower.rhs), (Some(210), Some(361)));
        assert!(lower.holds);

        // 2 * 3 * floor(5/3) - 5 = 1 = F_1.
        let (a, _) = inst(&[2, 3, 5], 1);
        let (_, upper) = classical_bounds(&a, &l).unwrap();
        assert!(upper.holds && upper.equality);

        // Reading the bound as 2 a_max floor(a_min/n) - a_min would give 77 < 83.
        let (a, _) = inst(&[21, 15, 7], 1);
        let (_, upper) = classical_bounds(&a, &l).unwrap();
        assert_eq!((upper.lhs, upper.rhs), (Some(83), Some(189)));

        let (a, _) = inst(&[5, 5, 7], 1);
        let (_, upper) = classical_bounds(&a, &l).unwrap();
        assert_eq!(upper.status, Status::NotApplicable);

        let (a, _) = inst(&[3, 5], 1);
        assert!(classical_bounds(&a, &l).is_err());
    }

    #[test]
    fn minima_bound_examples() {
        let l = Limits::default();
        let (a, s) = inst(&[3, 5], 1);
        let r = proposition_minima_bound(&a, s, &l).unwrap();
        assert!(r.holds);
        let (a, s) = inst(&[3, 5], 4);
        let r = proposition_minima_bound(&a, s, &l).unwrap();
        // d = 1: 60 <= (1 + 3) * 15, cleared as 45 <= 15 * 1 * 3.
        assert_eq!((r.lhs, r.rhs), (Some(45), Some(45)));
        assert!(r.holds && r.equality);
        let (a, s) = inst(&[3, 5, 7], 1);
        let r = proposition_minima_bound(&a, s, &l).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn minima_overflow_is_inconclusive() {
        let (a, s) = inst(&[3, 5, 7], 2);
        let r = minima_bound_from(&a, s, i128::MAX / 2, 1 << 80);
        assert_eq!(r.status, Status::Inconclusive);
        assert!(r.applicable && !r.holds);
    }

    #[test]
    fn verify_examples() {
        let l = Limits::default();
        let (a, s) = inst(&[3, 5], 2);
        let reports = verify_instance(&a, s, &l).unwrap();
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.holds));

        let (a, s) = inst(&[2, 3, 5], 1);
        let reports = verify_instance(&a, s, &l).unwrap();
        assert_eq!(reports.len(), 7);
        let upper = reports.iter().find(|r| r.bound == BoundKind::ClassicalUpper).unwrap();
        assert!(upper.holds);

        let (a, s) = inst(&[5, 5, 7], 1);
        let reports = verify_instance(&a, s, &l).unwrap();
        let upper = reports.iter().find(|r| r.bound == BoundKind::ClassicalUpper).unwrap();
        assert_eq!(upper.status, Status::NotApplicable);

        let (a, s) = inst(&[1, 2], 1);
        let reports = verify_instance(&a, s, &l).unwrap();
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn budget_exhaustion_is_inconclusive_in_aggregate() {
        let (a, s) = inst(&[3, 5, 7], 1);
        let l = Limits {
            max_enumeration_nodes: 2,
            ..Limits::default()
        };
        let reports = verify_instance(&a, s, &l).unwrap();
        let m = reports.iter().find(|r| r.bound == BoundKind::MinimaUpper).unwrap();
        assert_eq!(m.status, Status::Inconclusive);
    }

    fn instance() -> impl Strategy<Value = (Vec<i128>, i128)> {
        (
            prop::collection::vec(1i128..=40, 2..=4)
                .prop_filter("primitive", |v| crate::instance::gcd_vector(v).unwrap() == 1),
            1i128..=4,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn no_applicable_report_fails((v, s) in instance()) {
            let (a, s) = inst(&v, s);
            for r in verify_instance(&a, s, &Limits::default()).unwrap() {
                prop_assert!(r.holds || !r.applicable || r.status == Status::Inconclusive, "{:?}", r);
            }
        }

        #[test]
        fn two_entries_are_sharp(
            (a1, a2) in (1i128..=40, 1i128..=40).prop_filter("coprime", |(x, y)| arith::gcd(*x, *y) == 1),
            s in 1i128..=6,
        ) {
            let (a, s) = inst(&[a1, a2], s);
            let l = Limits::default();
            prop_assert!(theorem_main_lower(&a, s, &l).unwrap().equality);
            prop_assert!(theorem_main_upper(&a, s, &l).unwrap().equality);
        }

        /// The cleared-power verdicts agree with a float evaluation of the
        /// original inequalities wherever the float margin is decisive.
        #[test]
        fn clearing_agrees_with_floats((v, s) in instance()) {
            let (a, s) = inst(&v, s);
            let l = Limits::default();
            let d = (a.n() - 1) as f64;
            let p = a.scaled_product().unwrap() as f64;
            let sum = a.sum().unwrap() as f64;
            let f_s = frobenius(&a, s, &l).unwrap() as f64;
            let f_1 = frobenius(&a, Multiplicity::ONE, &l).unwrap() as f64;
            let sf = s.get() as f64;
            let tol = 1e-9 * (p + sum + f_s.abs()).max(1.0);

            let lower = theorem_main_lower_from(&a, s, f_s as i128).unwrap();
            let margin = f_s - ((sf * p).powf(1.0 / d) - sum);
            if margin.abs() > tol {
                prop_assert_eq!(lower.holds, margin > 0.0);
            }
            let upper = theorem_main_upper_from(&a, s, f_s as i128, f_1 as i128).unwrap();
            let margin = f_1 + ((sf - 1.0) * p).powf(1.0 / d) - f_s;
            if margin.abs() > tol {
                prop_assert_eq!(upper.holds, margin > 0.0);
            }
        }
    }
}
