//! Exact Fourier–Motzkin elimination over integer-coefficient systems.
//!
//! A row `[a_0, ..., a_{n-1}, c]` stands for `a·x + c >= 0` (inequality) or
//! `a·x + c == 0` (equality). Combinations only use positive integer
//! multipliers, so rows stay integral and every projection is exact over Q.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Row = Vec<BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("polyhedron is unbounded in coordinate {0}")]
    Unbounded(usize),
    #[error("lattice point enumeration exceeded the limit of {limit} candidates")]
    LimitExceeded { limit: u64 },
    #[error("coordinate bound {0} does not fit in 64 bits")]
    Overflow(BigInt),
}

/// Default cap on candidate points visited during enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, Default)]
pub struct System {
    nvars: usize,
    eqs: BTreeSet<Row>,
    ineqs: BTreeSet<Row>,
}

fn normalize(mut row: Row) -> Row {
    let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

fn normalize_eq(row: Row) -> Row {
    let mut row = normalize(row);
    if let Some(first) = row.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
    }
    row
}

fn combine(p: &Row, mp: &BigInt, q: &Row, mq: &BigInt) -> Row {
    p.iter().zip(q).map(|(a, b)| a * mp + b * mq).collect()
}

impl System {
    pub fn new(nvars: usize) -> Self {
        System { nvars, ..Default::default() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_ineq(&mut self, row: Row) {
        assert_eq!(row.len(), self.nvars + 1);
        if row[..self.nvars].iter().all(Zero::is_zero) && !row[self.nvars].is_negative() {
            return;
        }
        self.ineqs.insert(normalize(row));
    }

    pub fn add_eq(&mut self, row: Row) {
        assert_eq!(row.len(), self.nvars + 1);
        if row.iter().all(Zero::is_zero) {
            return;
        }
        self.eqs.insert(normalize_eq(row));
    }

    /// Constraints implied on the remaining variables after removing `var`.
    /// The result has one fewer variable; indices above `var` shift down.
    pub fn eliminate(&self, var: usize) -> System {
        let mut out = System::new(self.nvars - 1);
        let drop =
            |row: &Row| -> Row { row.iter().enumerate().filter(|&(i, _)| i != var).map(|(_, v)| v.clone()).collect() };

        if let Some(pivot) = self.eqs.iter().find(|r| !r[var].is_zero()) {
            let e = &pivot[var];
            let (me, sign) = (e.abs(), if e.is_negative() { -BigInt::one() } else { BigInt::one() });
            for r in &self.eqs {
                if std::ptr::eq(r, pivot) {
                    continue;
                }
                let row = combine(r, &me, pivot, &(-&r[var] * &sign));
                out.add_eq(drop(&row));
            }
            for r in &self.ineqs {
                let row = combine(r, &me, pivot, &(-&r[var] * &sign));
                out.add_ineq(drop(&row));
            }
            return out;
        }

        for r in &self.eqs {
            out.add_eq(drop(r));
        }
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for r in &self.ineqs {
            if r[var].is_positive() {
                pos.push(r);
            } else if r[var].is_negative() {
                neg.push(r);
            } else {
                out.add_ineq(drop(r));
            }
        }
        for p in &pos {
            for n in &neg {
                let row = combine(p, &(-&n[var]), n, &p[var]);
                out.add_ineq(drop(&row));
            }
        }
        out
    }

    /// True when the constraints have a rational solution.
    pub fn is_feasible(&self) -> bool {
        let mut sys = self.clone();
        while sys.nvars > 0 {
            if sys.has_contradiction() {
                return false;
            }
            sys = sys.eliminate(sys.nvars - 1);
        }
        !sys.has_contradiction()
    }

    fn has_contradiction(&self) -> bool {
        let n = self.nvars;
        let constant = |r: &Row| r[..n].iter().all(Zero::is_zero);
        self.ineqs.iter().any(|r| constant(r) && r[n].is_negative())
            || self.eqs.iter().any(|r| constant(r) && !r[n].is_zero())
    }

    /// Substitutes `value` for variable 0; remaining indices shift down.
    fn fix_first(&self, value: &BigInt) -> System {
        let n = self.nvars - 1;
        let sub = |r: &Row| -> Row {
            let mut out: Row = r[1..=n].to_vec();
            out.push(&r[n + 1] + &r[0] * value);
            out
        };
        let mut s = System::new(n);
        for r in &self.eqs {
            s.add_eq(sub(r));
        }
        for r in &self.ineqs {
            s.add_ineq(sub(r));
        }
        s
    }
}

/// Integer range `[lo, hi]` for the single variable of a one-variable
/// system; `None` when empty.
fn single_range(sys: &System, coord: usize) -> Result<Option<(BigInt, BigInt)>, EnumerationError> {
    debug_assert_eq!(sys.nvars, 1);
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    let mut tighten = |a: &BigInt, c: &BigInt, is_eq: bool| -> bool {
        if a.is_zero() {
            return if is_eq { c.is_zero() } else { !c.is_negative() };
        }
        // a x + c >= 0
        if is_eq {
            if !(-c).is_multiple_of(a) {
                return false;
            }
            let v = -c / a;
            lo = Some(lo.take().map_or(v.clone(), |l| l.max(v.clone())));
            hi = Some(hi.take().map_or(v.clone(), |h| h.min(v)));
        } else if a.is_positive() {
            let v = (-c).div_ceil(a);
            lo = Some(lo.take().map_or(v.clone(), |l| l.max(v)));
        } else {
            let v = c.div_floor(&(-a));
            hi = Some(hi.take().map_or(v.clone(), |h| h.min(v)));
        }
        true
    };
    for r in &sys.eqs {
        if !tighten(&r[0], &r[1], true) {
            return Ok(None);
        }
    }
    for r in &sys.ineqs {
        if !tighten(&r[0], &r[1], false) {
            return Ok(None);
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => Ok(if l <= h { Some((l, h)) } else { None }),
        _ => Err(EnumerationError::Unbounded(coord)),
    }
}

/// All integer points of `{x ∈ Z^n : a·x + c >= 0 for every row}`,
/// sorted lexicographically.
///
/// Variables are eliminated from the last one down, and the nested ranges
/// of the projections drive the enumeration, so only points of the exact
/// rational projections are visited. `limit` caps the number of visited
/// candidates.
pub fn integer_points(nvars: usize, rows: &[Row], limit: u64) -> Result<Vec<Vec<i64>>, EnumerationError> {
    let mut top = System::new(nvars);
    for r in rows {
        top.add_ineq(r.clone());
    }
    if nvars == 0 {
        return Ok(if top.has_contradiction() { vec![] } else { vec![vec![]] });
    }
    // chain[k] has variables 0..=k
    let mut chain = vec![top];
    while chain.last().unwrap().nvars > 1 {
        let s = chain.last().unwrap();
        let next = s.eliminate(s.nvars - 1);
        chain.push(next);
    }
    chain.reverse();

    // Bounded iff the recession cone {a·x >= 0} is trivial.
    for k in 0..nvars {
        for sign in [1i64, -1] {
            let mut cone = System::new(nvars);
            for r in rows {
                let mut h = r.clone();
                h[nvars] = BigInt::zero();
                cone.add_ineq(h);
            }
            let mut probe = vec![BigInt::zero(); nvars + 1];
            probe[k] = BigInt::from(sign);
            probe[nvars] = BigInt::from(-1);
            cone.add_ineq(probe);
            if cone.is_feasible() {
                return Err(EnumerationError::Unbounded(k));
            }
        }
    }

    let mut out = Vec::new();
    let mut visited = 0u64;
    let mut prefix = Vec::with_capacity(nvars);
    let first = chain[0].clone();
    walk(&chain, 0, &first, &mut prefix, &mut out, &mut visited, limit)?;
    Ok(out)
}

fn to_i64(v: &BigInt) -> Result<i64, EnumerationError> {
    v.to_i64().ok_or_else(|| EnumerationError::Overflow(v.clone()))
}

fn walk(
    chain: &[System],
    depth: usize,
    current: &System,
    prefix: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    visited: &mut u64,
    limit: u64,
) -> Result<(), EnumerationError> {
    let Some((lo, hi)) = single_range(current, depth)? else {
        return Ok(());
    };
    let (lo, hi) = (to_i64(&lo)?, to_i64(&hi)?);
    for v in lo..=hi {
        *visited += 1;
        if *visited > limit {
            return Err(EnumerationError::LimitExceeded { limit });
        }
        prefix.push(v);
        if depth + 1 == chain.len() {
            out.push(prefix.clone());
        } else {
            let next = prefix.iter().fold(chain[depth + 1].clone(), |s, p| s.fix_first(&BigInt::from(*p)));
            walk(chain, depth + 1, &next, prefix, out, visited, limit)?;
        }
        prefix.pop();
    }
    Ok(())
}
