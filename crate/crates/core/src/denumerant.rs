//! Capped representation counts.
//!
//! `counts[b]` is the number of `z >= 0` with `<coins, z> = b`, saturated at a
//! cap. Only the comparison "at least s representations" is ever needed, so
//! saturating at `s` loses nothing and keeps the table in `u32`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{InputVector, Multiplicity};

/// Environment variable overriding [`Limits::max_table_entries`].
pub const MEM_BUDGET_ENV: &str = "FROBGEOM_MEM_BUDGET";

/// Resource budgets. Exceeding one is a hard error, never a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of entries in any counting table.
    pub max_table_entries: u64,
    /// Maximum number of search nodes visited by lattice enumeration.
    pub max_enumeration_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_table_entries: 1 << 31,
            max_enumeration_nodes: 20_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with the table budget taken from `FROBGEOM_MEM_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Self::default();
        if let Ok(raw) = std::env::var(MEM_BUDGET_ENV) {
            limits.max_table_entries = raw.trim().parse().map_err(|_| {
                Error::InvalidConfig(format!("{MEM_BUDGET_ENV}={raw:?} is not a table size"))
            })?;
        }
        Ok(limits)
    }

    pub(crate) fn check_table(&self, what: &'static str, entries: u128) -> Result<()> {
        if entries > self.max_table_entries as u128 {
            return Err(Error::ResourceLimit {
                what,
                requested: entries,
                budget: self.max_table_entries as u128,
            });
        }
        Ok(())
    }
}

/// A representation count saturated at `cap`; `value == cap` reads as
/// "at least `cap`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CappedCount {
    pub value: u32,
    pub cap: u32,
}

impl CappedCount {
    pub fn is_saturated(&self) -> bool {
        self.value == self.cap
    }
}

#[derive(Debug, Clone)]
pub struct DenumerantTable {
    coins: Vec<i128>,
    cap: Multiplicity,
    counts: Vec<u32>,
}

impl DenumerantTable {
    pub fn coins(&self) -> &[i128] {
        &self.coins
    }

    pub fn cap(&self) -> Multiplicity {
        self.cap
    }

    /// Largest tabulated `b`.
    pub fn limit(&self) -> usize {
        self.counts.len() - 1
    }

    /// Raw saturated counts for `b = 0..=limit`.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, b: usize) -> u32 {
        self.counts[b]
    }

    pub fn get(&self, b: usize) -> CappedCount {
        CappedCount {
            value: self.counts[b],
            cap: self.cap.get(),
        }
    }
}

/// Tabulate capped counts for `b = 0..=limit`: coins are processed one at a
/// time with `counts[b] += counts[b - coin]`, saturating at `cap`.
pub fn build_table(
    coins: &[i128],
    limit: i128,
    cap: Multiplicity,
    limits: &Limits,
) -> Result<DenumerantTable> {
    if coins.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some((index, &value)) = coins.iter().enumerate().find(|(_, &c)| c <= 0) {
        return Err(Error::NonPositive { index, value });
    }
    if limit < 0 {
        return Err(Error::InvalidConfig(format!("table limit {limit} is negative")));
    }
    let entries = limit as u128 + 1;
    limits.check_table("denumerant table", entries)?;
    let len = usize::try_from(entries).map_err(|_| Error::ResourceLimit {
        what: "denumerant table",
        requested: entries,
        budget: usize::MAX as u128,
    })?;

    let cap_value = cap.get();
    let mut counts = vec![0u32; len];
    counts[0] = 1;
    for &coin in coins {
        let Ok(coin) = usize::try_from(coin) else {
            continue;
        };
        if coin >= len {
            continue;
        }
        for b in coin..len {
            let c = counts[b].saturating_add(counts[b - coin]);
            counts[b] = c.min(cap_value);
        }
    }

    Ok(DenumerantTable {
        coins: coins.to_vec(),
        cap,
        counts,
    })
}

/// `min(cap, #{z >= 0 : <a, z> = b})`.
pub fn denumerant(
    b: i128,
    a: &InputVector,
    cap: Multiplicity,
    limits: &Limits,
) -> Result<CappedCount> {
    if b < 0 {
        return Err(Error::InvalidConfig(format!("denumerant of negative value {b}")));
    }
    let table = build_table(a.entries(), b, cap, limits)?;
    Ok(table.get(b as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cap(s: i128) -> Multiplicity {
        Multiplicity::new(s).unwrap()
    }

    /// Exhaustive recursive enumeration of representations, independent of the DP.
    fn brute_count(coins: &[i128], b: i128) -> u64 {
        match coins.split_first() {
            None => u64::from(b == 0),
            Some((&c, rest)) => (0..=b / c).map(|k| brute_count(rest, b - k * c)).sum(),
        }
    }

    #[test]
    fn table_examples() {
        let l = Limits::default();
        let t = build_table(&[3, 5], 8, cap(4), &l).unwrap();
        assert_eq!((t.count(0), t.count(7), t.count(8)), (1, 0, 1));
        let t = build_table(&[3, 5], 15, cap(4), &l).unwrap();
        assert_eq!(t.count(15), 2);
        let t = build_table(&[2], 4, cap(4), &l).unwrap();
        assert_eq!(t.counts(), &[1, 0, 1, 0, 1]);
    }

    #[test]
    fn denumerant_examples() {
        let l = Limits::default();
        let a = InputVector::new(vec![3, 5]).unwrap();
        assert_eq!(denumerant(0, &a, cap(2), &l).unwrap().value, 1);
        assert_eq!(denumerant(7, &a, cap(2), &l).unwrap().value, 0);
        assert_eq!(denumerant(30, &a, cap(10), &l).unwrap().value, 3);
        assert_eq!(brute_count(&[3, 5], 30), 3);
        assert_eq!(brute_count(&[3, 5], 7), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let l = Limits {
            max_table_entries: 100,
            ..Limits::default()
        };
        assert!(build_table(&[3, 5], 99, cap(1), &l).is_ok());
        assert!(matches!(
            build_table(&[3, 5], 100, cap(1), &l),
            Err(Error::ResourceLimit { requested: 101, budget: 100, .. })
        ));
    }

    #[test]
    fn rejects_bad_coins() {
        let l = Limits::default();
        assert!(matches!(build_table(&[], 5, cap(1), &l), Err(Error::EmptyInput)));
        assert!(matches!(
            build_table(&[3, -1], 5, cap(1), &l),
            Err(Error::NonPositive { index: 1, .. })
        ));
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            coins in prop::collection::vec(1i128..12, 1..4),
            s in 1i128..6,
        ) {
            prop_assume!(coins.iter().sum::<i128>() <= 30);
            let t = build_table(&coins, 100, cap(s), &Limits::default()).unwrap();
            for b in 0..=100 {
                let expected = brute_count(&coins, b as i128).min(s as u64) as u32;
                prop_assert_eq!(t.count(b), expected, "b = {}", b);
            }
        }

        #[test]
        fn saturated_monotonicity_and_order_invariance(
            mut coins in prop::collection::vec(1i128..25, 1..5),
            s in 1i128..5,
        ) {
            let l = Limits::default();
            let t = build_table(&coins, 200, cap(s), &l).unwrap();
            for &c in &coins {
                for b in 0..=(200 - c as usize) {
                    prop_assert!(t.count(b + c as usize) >= t.count(b));
                }
            }
            coins.reverse();
            let r = build_table(&coins, 200, cap(s), &l).unwrap();
            prop_assert_eq!(t.counts(), r.counts());
        }

        #[test]
        fn single_coin_divisibility(c in 1i128..20, s in 1i128..4) {
            let t = build_table(&[c], 120, cap(s), &Limits::default()).unwrap();
            for b in 0..=120usize {
                prop_assert_eq!(t.count(b), u32::from(b as i128 % c == 0));
            }
        }
    }
}
