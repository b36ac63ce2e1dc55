//! Brute-force reference computations that share no code with the
//! library: their own Gauss-code reader, literal Chen words, and Magnus
//! coefficients extracted one monomial at a time.

#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;

/// (crossing, is_over, sign)
pub type RawEvent = (u32, bool, i64);

#[derive(Clone, Debug)]
pub struct RawDiagram {
    pub comps: Vec<Vec<RawEvent>>,
}

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

impl RawDiagram {
    pub fn parse(text: &str) -> Self {
        let mut comps = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (_, body) = line.split_once(':').expect("component line");
            comps.push(
                body.split_whitespace()
                    .map(|tok| {
                        let over = tok.starts_with('O');
                        let sign = if tok.ends_with('+') { 1 } else { -1 };
                        (tok[1..tok.len() - 1].parse().unwrap(), over, sign)
                    })
                    .collect(),
            );
        }
        RawDiagram { comps }
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    /// Arc carrying the over event of `crossing`: (component, number of
    /// under events before it).
    fn over_arc(&self, crossing: u32) -> (usize, usize) {
        for (i, c) in self.comps.iter().enumerate() {
            let mut unders = 0;
            for &(id, over, _) in c {
                if over && id == crossing {
                    return (i, unders);
                }
                if !over {
                    unders += 1;
                }
            }
        }
        panic!("no over event for {crossing}")
    }

    /// Per component, the under-crossings in order: (over arc, sign).
    fn unders(&self) -> Vec<Vec<((usize, usize), i64)>> {
        self.comps
            .iter()
            .map(|c| {
                c.iter()
                    .filter(|e| !e.1)
                    .map(|&(id, _, s)| (self.over_arc(id), s))
                    .collect()
            })
            .collect()
    }

    /// Literal `eta_q` words of every arc, as signed 1-based generators,
    /// freely reduced.
    pub fn eta(&self, q: usize) -> Vec<Vec<Vec<i64>>> {
        let unders = self.unders();
        let mut words: Vec<Vec<Vec<i64>>> = unders
            .iter()
            .enumerate()
            .map(|(i, u)| vec![vec![i as i64 + 1]; u.len() + 1])
            .collect();
        for _ in 1..q {
            let prev = words.clone();
            for (i, u) in unders.iter().enumerate() {
                let mut v: Vec<i64> = Vec::new();
                for (j, &(arc, s)) in u.iter().enumerate() {
                    append(&mut v, &prev[arc.0][arc.1], s);
                    let mut w = inverse(&v);
                    append(&mut w, &[i as i64 + 1], 1);
                    append(&mut w, &v, 1);
                    words[i][j + 1] = w;
                }
            }
        }
        words
    }

    /// `eta_q(lambda_k)`.
    pub fn longitude(&self, q: usize, k: usize) -> Vec<i64> {
        let eta = self.eta(q);
        let unders = &self.unders()[k];
        let w: i64 = unders.iter().filter(|(arc, _)| arc.0 == k).map(|(_, s)| s).sum();
        let mut out = Vec::new();
        let base = vec![k as i64 + 1];
        for _ in 0..w.abs() {
            append(&mut out, &base, -w.signum());
        }
        for &(arc, s) in unders {
            append(&mut out, &eta[arc.0][arc.1], s);
        }
        out
    }

    /// Signed count of crossings with the over strand on `i` and the under
    /// strand on `k`.
    pub fn linking(&self, i: usize, k: usize) -> i64 {
        let mut total = 0;
        for &(id, over, s) in &self.comps[k] {
            if !over && self.over_arc(id).0 == i {
                total += s;
            }
        }
        total
    }

    /// `mu(seq)` (0-based) from literal words at order `|seq|`.
    pub fn mu(&self, seq: &[usize]) -> BigInt {
        if seq.len() < 2 {
            return BigInt::from(0);
        }
        let (k, prefix) = seq.split_last().unwrap();
        coefficient(&self.longitude(seq.len(), *k), prefix)
    }
}

fn append(out: &mut Vec<i64>, w: &[i64], sign: i64) {
    let letters: Vec<i64> = if sign > 0 { w.to_vec() } else { inverse(w) };
    for x in letters {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
}

fn inverse(w: &[i64]) -> Vec<i64> {
    w.iter().rev().map(|x| -x).collect()
}

/// Coefficient of `X_{m_1} ... X_{m_s}` (0-based) in the Magnus expansion
/// of a word of signed 1-based generators, by dynamic programming over the
/// matched prefix of the monomial.
pub fn coefficient(word: &[i64], monomial: &[usize]) -> BigInt {
    let s = monomial.len();
    let mut dp = vec![BigInt::from(0); s + 1];
    dp[0] = BigInt::from(1);
    for &x in word {
        let g = (x.unsigned_abs() - 1) as usize;
        let mut next = dp.clone();
        for t in 0..s {
            if dp[t] == BigInt::from(0) {
                continue;
            }
            // (1 + X)^(+-1): coefficient of X^j is 1 for j = 1, or (-1)^j
            let mut j = 1;
            while t + j <= s && monomial[t + j - 1] == g {
                let c = if x > 0 {
                    if j == 1 { 1 } else { 0 }
                } else if j % 2 == 0 {
                    1
                } else {
                    -1
                };
                if c != 0 {
                    next[t + j] += &dp[t] * c;
                }
                j += 1;
            }
        }
        dp = next;
    }
    dp[s].clone()
}

/// Corpus of named fixture diagrams.
pub fn corpus() -> Vec<(&'static str, String)> {
    ["hopf", "kink", "trivial3", "borromean", "double_clasp", "knot6", "perf12"]
        .iter()
        .map(|n| (*n, fixture(&format!("{n}.gauss"))))
        .collect()
}
