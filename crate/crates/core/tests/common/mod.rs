//! Brute-force oracles shared by the integration tests. They use explicit
//! degree vectors and never touch the library's normal forms.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

pub fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Explicit grading: one degree vector per variable and a positive weight
/// per variable (`weight · degree`), so monomials of a fixed degree have
/// fixed total weight.
#[derive(Clone, Debug)]
pub struct Explicit {
    pub degrees: Vec<Vec<i64>>,
    pub functional: Vec<i64>,
}

impl Explicit {
    pub fn new(degrees: Vec<Vec<i64>>, functional: Vec<i64>) -> Self {
        let e = Explicit { degrees, functional };
        assert!(e.weights().iter().all(|&w| w > 0), "functional must be positive on every variable");
        e
    }

    pub fn weights(&self) -> Vec<i64> {
        self.degrees.iter().map(|d| dot(d, &self.functional)).collect()
    }

    pub fn degree_of(&self, e: &[u32]) -> Vec<i64> {
        let k = self.functional.len();
        (0..k).map(|c| e.iter().zip(&self.degrees).map(|(&a, d)| a as i64 * d[c]).sum()).collect()
    }

    /// Every exponent vector of the given degree.
    pub fn monomials(&self, target: &[i64]) -> BTreeSet<Vec<u32>> {
        let w = self.weights();
        let total = dot(target, &self.functional);
        let mut out = BTreeSet::new();
        if total < 0 {
            return out;
        }
        let mut e = vec![0u32; w.len()];
        self.walk(0, total, &w, &mut e, target, &mut out);
        out
    }

    fn walk(&self, i: usize, left: i64, w: &[i64], e: &mut Vec<u32>, target: &[i64], out: &mut BTreeSet<Vec<u32>>) {
        if i == w.len() {
            if left == 0 && self.degree_of(e) == target {
                out.insert(e.clone());
            }
            return;
        }
        let mut k = 0;
        while k * w[i] <= left {
            e[i] = k as u32;
            self.walk(i + 1, left - k * w[i], w, e, target, out);
            k += 1;
        }
        e[i] = 0;
    }

    /// `(variable, monomial)` pairs with `deg m = deg x` and `x ∤ m`.
    pub fn roots(&self) -> BTreeSet<(usize, Vec<u32>)> {
        let mut out = BTreeSet::new();
        for v in 0..self.degrees.len() {
            for m in self.monomials(&self.degrees[v]) {
                if m[v] == 0 {
                    out.insert((v, m));
                }
            }
        }
        out
    }

    /// Grading of `P(E)`: `x_i ↦ (deg x_i, 0)`, `y_j ↦ (-α_j, 1)`.
    pub fn projectivized(&self, divisors: &[Vec<i64>]) -> Explicit {
        let alphas: Vec<Vec<i64>> = divisors
            .iter()
            .map(|d| {
                let e: Vec<u32> = d.iter().map(|&a| a as u32).collect();
                self.degree_of(&e)
            })
            .collect();
        let top = alphas.iter().map(|a| dot(a, &self.functional)).max().unwrap_or(0) + 1;
        let mut degrees: Vec<Vec<i64>> = self.degrees.iter().map(|d| d.iter().copied().chain([0]).collect()).collect();
        degrees.extend(alphas.iter().map(|a| a.iter().map(|x| -x).chain([1]).collect()));
        let mut functional = self.functional.clone();
        functional.push(top);
        Explicit::new(degrees, functional)
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn projective_space(n: usize) -> Explicit {
    Explicit::new(vec![vec![1]; n + 1], vec![1])
}

pub fn p1_x_p1() -> Explicit {
    Explicit::new(vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]], vec![1, 1])
}

pub fn weighted(weights: &[i64]) -> Explicit {
    Explicit::new(weights.iter().map(|&w| vec![w]).collect(), vec![1])
}
