//! The Kannan simplex `S_a = {x >= 0 : a_1 x_1 + ... + a_{n-1} x_{n-1} <= 1}`
//! and the Frobenius lattice `Λ_a = {z ∈ Z^{n-1} : a_1 z_1 + ... ≡ 0 mod a_n}`.
//!
//! The last entry of the instance is the modulus. The integral covering
//! radius is computed here from first principles, without going through the
//! [`crate::frobenius`] routines, so the two can be checked against each other.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::denumerant::{build_table, Limits};
use crate::error::{Error, Result};
use crate::frobenius::{frobenius, search_bound};
use crate::instance::{InputVector, Multiplicity};
use crate::par::{self, Execution};

pub type Rational = Ratio<i128>;

/// `S_a` in dimension `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusSimplex {
    prefix: Vec<i128>,
}

impl FrobeniusSimplex {
    pub fn new(a: &InputVector) -> Self {
        Self {
            prefix: a.prefix().to_vec(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.prefix.len()
    }

    pub fn coefficients(&self) -> &[i128] {
        &self.prefix
    }

    /// `1 / ((n-1)! a_1 ... a_{n-1})`.
    pub fn volume(&self) -> Result<Rational> {
        let f = arith::factorial(self.dimension() as u32)?;
        let p = arith::product(&self.prefix, "simplex volume")?;
        Ok(Rational::new(1, arith::mul(f, p, "simplex volume")?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusLattice {
    pub a: InputVector,
    /// Basis columns, upper triangular with positive diagonal, in Hermite
    /// normal form: entry `(i, k)` for `k > i` lies in `[0, basis[i][i])`.
    pub basis: Vec<Vec<i128>>,
    pub modulus: i128,
}

impl FrobeniusLattice {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `|det|` of the basis: the product of the diagonal.
    pub fn determinant(&self) -> Result<i128> {
        (0..self.dimension()).try_fold(1i128, |acc, i| {
            arith::mul(acc, self.basis[i][i], "lattice determinant")
        })
    }

    pub fn contains(&self, z: &[i128]) -> Result<bool> {
        Ok(residue_of(self.a.prefix(), z, self.modulus)? == 0)
    }

    /// Representatives of `Z^{n-1} / Λ_a`: the box `0 <= x_i < basis[i][i]`.
    pub fn coset_representatives(&self) -> Vec<Vec<i128>> {
        let d = self.dimension();
        let mut out = vec![Vec::with_capacity(d)];
        for i in 0..d {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..self.basis[i][i]).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// `<coeffs, z> mod modulus` in `[0, modulus)`.
fn residue_of(coeffs: &[i128], z: &[i128], modulus: i128) -> Result<i128> {
    if coeffs.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: coeffs.len(),
            got: z.len(),
        });
    }
    coeffs.iter().zip(z).try_fold(0i128, |acc, (&c, &x)| {
        let term = arith::mul(c % modulus, x.rem_euclid(modulus), "lattice residue")?;
        Ok((acc + term % modulus) % modulus)
    })
}

/// Replace columns `(p, q)` by `(x p + y q, u p + v q)`.
fn combine(cols: &mut [Vec<i128>], p: usize, q: usize, [x, y, u, v]: [i128; 4]) -> Result<()> {
    let what = "lattice basis reduction";
    for r in 0..cols[p].len() {
        let (cp, cq) = (cols[p][r], cols[q][r]);
        cols[p][r] = arith::add(arith::mul(x, cp, what)?, arith::mul(y, cq, what)?, what)?;
        cols[q][r] = arith::add(arith::mul(u, cp, what)?, arith::mul(v, cq, what)?, what)?;
    }
    Ok(())
}

/// Column Hermite normal form of a square nonsingular integer matrix.
fn hermite_normal_form(mut cols: Vec<Vec<i128>>) -> Result<Vec<Vec<i128>>> {
    let d = cols.len();
    for i in (0..d).rev() {
        for k in 0..i {
            let (pivot, other) = (cols[i][i], cols[k][i]);
            if other == 0 {
                continue;
            }
            let (g, x, y) = arith::ext_gcd(pivot, other);
            combine(&mut cols, i, k, [x, y, other / g, -(pivot / g)])?;
        }
        if cols[i][i] < 0 {
            cols[i].iter_mut().for_each(|v| *v = -*v);
        }
        assert!(cols[i][i] != 0, "singular generator matrix");
    }
    for i in (0..d).rev() {
        let diag = cols[i][i];
        for k in i + 1..d {
            let q = cols[k][i].div_euclid(diag);
            if q != 0 {
                combine(&mut cols, i, k, [1, 0, -q, 1])?;
            }
        }
    }
    Ok(cols)
}

/// Basis of `Λ_a`.
///
/// The integer kernel of the row `(a_1, ..., a_n)` projects bijectively onto
/// `Λ_a` by dropping the last coordinate. The kernel is read off a unimodular
/// transform that reduces the row to `(1, 0, ..., 0)`; the projected basis is
/// then put in Hermite normal form.
pub fn build_lattice(a: &InputVector) -> Result<FrobeniusLattice> {
    let n = a.n();
    let mut row = a.entries().to_vec();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| i128::from(i == j)).collect())
        .collect();
    for j in 1..n {
        let (r0, rj) = (row[0], row[j]);
        if rj == 0 {
            continue;
        }
        let (g, x, y) = arith::ext_gcd(r0, rj);
        combine(&mut u, 0, j, [x, y, rj / g, -(r0 / g)])?;
        row[0] = g;
        row[j] = 0;
    }
    debug_assert_eq!(row[0], 1);
    let generators: Vec<Vec<i128>> = u[1..].iter().map(|c| c[..n - 1].to_vec()).collect();
    Ok(FrobeniusLattice {
        a: a.clone(),
        basis: hermite_normal_form(generators)?,
        modulus: a.last(),
    })
}

/// `vol(S_a)` as an exact rational.
pub fn simplex_volume(a: &InputVector) -> Result<Rational> {
    FrobeniusSimplex::new(a).volume()
}

/// `det(Λ_a) / vol(S_a)`, computed from the lattice basis and the simplex.
pub fn det_over_volume(a: &InputVector) -> Result<Rational> {
    let det = build_lattice(a)?.determinant()?;
    let vol = simplex_volume(a)?;
    let num = arith::mul(det, *vol.denom(), "det / vol")?;
    Ok(Rational::new(num, *vol.numer()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringRadiusResult {
    pub value: i128,
    /// `per_residue_witness[c]` is the threshold for anchors `z` with
    /// `<ã, z> ≡ -c (mod a_n)`.
    pub per_residue_witness: Vec<i128>,
}

/// The integral s-covering radius `μ̄_s(S_a, Λ_a; Z^{n-1})`.
///
/// Coverage of `z + ρ S_a` depends only on `z` modulo the lattice. Lattice
/// points `b` in it correspond to `w = b - z >= 0` with `<ã, w> <= ρ` and
/// `<ã, w> ≡ -<ã, z> (mod a_n)`. So for every residue `c` the threshold is
/// the first `t ≡ c` at which the cumulative count of such `w` reaches `s`,
/// and the radius is the largest threshold.
pub fn integral_covering_radius(
    a: &InputVector,
    s: Multiplicity,
    limits: &Limits,
    exec: Execution,
) -> Result<CoveringRadiusResult> {
    let modulus = a.last();
    let horizon = arith::add(search_bound(a, s)?, modulus, "covering horizon")?;
    let table = build_table(a.prefix(), horizon, s, limits)?;
    let counts = table.counts();
    let m = usize::try_from(modulus).map_err(|_| Error::ArithmeticOverflow("modulus"))?;
    let need = s.get();

    let per_residue_witness = par::try_map_indexed(m, exec, |c| {
        let mut seen = 0u32;
        for t in (c..counts.len()).step_by(m) {
            seen = seen.saturating_add(counts[t]);
            if seen >= need {
                return Ok(t as i128);
            }
        }
        Err(Error::InternalBoundViolation {
            residue: c as i128,
            bound: horizon,
        })
    })?;
    let value = *per_residue_witness.iter().max().expect("modulus >= 1");
    Ok(CoveringRadiusResult {
        value,
        per_residue_witness,
    })
}

/// `μ_s(S_a, Λ_a) = F_s(a) + a_1 + ... + a_n`.
pub fn covering_radius_identity(a: &InputVector, s: Multiplicity, limits: &Limits) -> Result<i128> {
    arith::add(frobenius(a, s, limits)?, a.sum()?, "covering radius identity")
}

fn split_parts(v: &[i128], prefix: &[i128]) -> Result<(i128, i128)> {
    if v.len() != prefix.len() {
        return Err(Error::DimensionMismatch {
            expected: prefix.len(),
            got: v.len(),
        });
    }
    let what = "difference gauge";
    let mut pos = 0i128;
    let mut neg = 0i128;
    for (&x, &c) in v.iter().zip(prefix) {
        let t = arith::mul(c, x, what)?;
        if t > 0 {
            pos = arith::add(pos, t, what)?;
        } else {
            neg = arith::sub(neg, t, what)?;
        }
    }
    Ok((pos, neg))
}

/// Gauge of `v` with respect to the difference body `S_a - S_a`:
/// `max(<ã, v⁺>, <ã, v⁻>)`.
///
/// Any split `v = x - y` with `x, y >= 0` dominates the split into positive
/// and negative parts, and `ã > 0`, so that split is optimal.
pub fn difference_gauge(v: &[i128], a: &InputVector) -> Result<Rational> {
    let (pos, neg) = split_parts(v, a.prefix())?;
    Ok(Rational::from_integer(pos.max(neg)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuccessiveMinima {
    pub values: Vec<Rational>,
    /// Linearly independent lattice vectors attaining the minima.
    pub vectors: Vec<Vec<i128>>,
    /// Final enumeration radius.
    pub radius: i128,
}

/// Incremental rank test over the integers.
struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    fn insert(&mut self, v: &[i128]) -> Result<bool> {
        let what = "rank test";
        let mut w = v.to_vec();
        for (p, e) in &self.rows {
            if w[*p] == 0 {
                continue;
            }
            let (ep, wp) = (e[*p], w[*p]);
            for i in 0..w.len() {
                w[i] = arith::sub(arith::mul(ep, w[i], what)?, arith::mul(wp, e[i], what)?, what)?;
            }
            let g = w.iter().fold(0, |g, &x| arith::gcd(g, x));
            if g > 1 {
                w.iter_mut().for_each(|x| *x /= g);
            }
        }
        match w.iter().position(|&x| x != 0) {
            Some(p) => {
                self.rows.push((p, w));
                Ok(true)
            }
            None => Ok(false),
        }
    }
}

/// Depth-first enumeration of nonzero lattice vectors with gauge `<= radius`.
struct Enumerator<'a> {
    prefix: &'a [i128],
    modulus: i128,
    radius: i128,
    budget: u64,
    nodes: u64,
    found: Vec<(i128, Vec<i128>)>,
}

impl Enumerator<'_> {
    fn visit(&mut self, depth: usize, pos: i128, neg: i128, acc: i128, v: &mut Vec<i128>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceLimit {
                what: "successive minima enumeration",
                requested: self.nodes as u128,
                budget: self.budget as u128,
            });
        }
        let c = self.prefix[depth];
        let lo = -((self.radius - neg) / c);
        let hi = (self.radius - pos) / c;
        let last = depth + 1 == self.prefix.len();
        if last {
            // Only x with c x ≡ -acc (mod m) close the congruence.
            let (g, inv, _) = arith::ext_gcd(c % self.modulus, self.modulus);
            let target = (-acc).rem_euclid(self.modulus);
            if target % g != 0 {
                return Ok(());
            }
            let step = self.modulus / g;
            let x0 = ((target / g) % step * inv.rem_euclid(step)) % step;
            let mut x = lo + (x0 - lo).rem_euclid(step);
            while x <= hi {
                v.push(x);
                if v.iter().any(|&t| t != 0) {
                    let (p, q) = split_parts(v, self.prefix)?;
                    self.found.push((p.max(q), v.clone()));
                }
                v.pop();
                x += step;
            }
            return Ok(());
        }
        for x in lo..=hi {
            let t = c * x;
            let (p, q) = if t >= 0 { (pos + t, neg) } else { (pos, neg - t) };
            v.push(x);
            self.visit(depth + 1, p, q, (acc + t).rem_euclid(self.modulus), v)?;
            v.pop();
        }
        Ok(())
    }
}

/// Successive minima of `S_a` with respect to `Λ_a`, with attaining vectors.
///
/// Lattice vectors are enumerated by gauge up to a radius that starts at
/// `ceil((det/vol)^(1/d))` and doubles until `d` independent vectors appear;
/// it never needs to exceed `a_n * max(ã)` since `a_n e_i ∈ Λ_a`. The
/// enumerated vectors are taken greedily in gauge order, keeping those that
/// raise the rank.
pub fn successive_minima_with_vectors(a: &InputVector, limits: &Limits) -> Result<SuccessiveMinima> {
    let prefix = a.prefix();
    let d = prefix.len();
    let modulus = a.last();
    let ceiling = arith::mul(modulus, *prefix.iter().max().expect("d >= 1"), "minima radius")?;
    let mut radius = arith::ceil_root(a.scaled_product()?, d as u32).clamp(1, ceiling);
    let mut spent = 0u64;
    loop {
        let mut e = Enumerator {
            prefix,
            modulus,
            radius,
            budget: limits.max_enumeration_nodes - spent,
            nodes: 0,
            found: Vec::new(),
        };
        e.visit(0, 0, 0, 0, &mut Vec::with_capacity(d))
            .map_err(|err| match err {
                Error::ResourceLimit { what, budget, .. } => Error::ResourceLimit {
                    what,
                    requested: (spent + e.nodes) as u128,
                    budget: budget + spent as u128,
                },
                other => other,
            })?;
        spent += e.nodes;
        let mut found = e.found;
        found.sort();

        let mut echelon = Echelon { rows: Vec::new() };
        let mut values = Vec::with_capacity(d);
        let mut vectors = Vec::with_capacity(d);
        for (g, v) in found {
            if echelon.insert(&v)? {
                values.push(Rational::from_integer(g));
                vectors.push(v);
                if vectors.len() == d {
                    return Ok(SuccessiveMinima {
                        values,
                        vectors,
                        radius,
                    });
                }
            }
        }
        if radius >= ceiling {
            return Err(Error::InternalBoundViolation {
                residue: 0,
                bound: radius,
            });
        }
        radius = arith::mul(radius, 2, "minima radius")?.min(ceiling);
    }
}

/// `λ_1, ..., λ_{n-1}` of `S_a` with respect to `Λ_a`.
pub fn successive_minima(a: &InputVector, limits: &Limits) -> Result<Vec<Rational>> {
    Ok(successive_minima_with_vectors(a, limits)?.values)
}
