//! Randomized invariance campaigns. Iteration `i` draws everything from a
//! ChaCha stream keyed by `(seed, i)`, so any iteration can be replayed on
//! its own with `--start i --iters 1`.

use clap::ValueEnum;
use milnor_core::arrow::{add_tree, from_diagram, random_wk_tree, surgery};
use milnor_core::gauss::{apply_move, random_diagram, random_moves, BasedDiagram, MoveSpec};
use milnor_core::milnor::{all_sequences, max_multiplicity, MilnorTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Welded moves preserve mu up to length 4; rebasing preserves (Delta, mu-bar).
    Moves,
    /// Surgery along a degree-k tree preserves mu of length <= k.
    Wk,
    /// Surgery along a one-component degree-k tree preserves mu with r(I) <= k.
    Selfwk,
    /// Self-crossing changes preserve mu of sequences without repeats.
    Homotopy,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Moves => "moves",
            Check::Wk => "wk",
            Check::Selfwk => "selfwk",
            Check::Homotopy => "homotopy",
        }
    }
}

pub struct Campaign {
    pub check: Check,
    pub seed: u64,
    pub start: u64,
    pub iters: u64,
    pub k: Option<usize>,
}

pub fn iteration_rng(seed: u64, iteration: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    rng
}

/// Runs the campaign; violations come back in iteration order.
pub fn run(c: &Campaign) -> Vec<Value> {
    (c.start..c.start + c.iters)
        .into_par_iter()
        .map(|it| {
            let mut rng = iteration_rng(c.seed, it);
            let mut found = match c.check {
                Check::Moves => moves(&mut rng),
                Check::Wk => wk(&mut rng, c.k.unwrap_or([2, 3, 4][(it % 3) as usize]), false),
                Check::Selfwk => wk(&mut rng, c.k.unwrap_or([1, 2, 3][(it % 3) as usize]), true),
                Check::Homotopy => homotopy(&mut rng),
            };
            for v in &mut found {
                v["iteration"] = json!(it);
                v["seed"] = json!(c.seed);
                v["check"] = json!(c.check.name());
            }
            found
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn seq1(s: &[usize]) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

/// Compares `mu` on the sequences accepted by `keep`.
fn compare_mu(a: &BasedDiagram, b: &BasedDiagram, max_len: usize, keep: impl Fn(&[usize]) -> bool) -> Vec<Value> {
    let ta = MilnorTable::new(a, max_len).expect("valid order");
    let tb = MilnorTable::new(b, max_len).expect("valid order");
    let n = a.component_count();
    (1..=max_len)
        .flat_map(|len| all_sequences(n, len))
        .filter(|s| keep(s))
        .filter_map(|s| {
            let (x, y) = (ta.mu(&s).expect("in range"), tb.mu(&s).expect("in range"));
            (x != y).then(|| json!({"seq": seq1(&s), "before": x.to_string(), "after": y.to_string()}))
        })
        .collect()
}

fn tag(mut found: Vec<Value>, extra: Value) -> Vec<Value> {
    for v in &mut found {
        for (k, x) in extra.as_object().expect("object").iter() {
            v[k] = x.clone();
        }
    }
    found
}

fn small_diagram(rng: &mut ChaCha8Rng, min_n: usize, max_crossings: usize) -> BasedDiagram {
    let n = rng.gen_range(min_n..=3);
    let c = rng.gen_range(0..=max_crossings);
    random_diagram(rng, n, c)
}

fn moves(rng: &mut ChaCha8Rng) -> Vec<Value> {
    let d = small_diagram(rng, 1, 8);
    let count = rng.gen_range(0..=30);
    let (d2, trace) = random_moves(&d, count, rng.gen());
    let mut out = tag(
        compare_mu(&d, &d2, 4, |_| true),
        json!({"diagram": d.to_gauss(), "moves": trace}),
    );
    let comps: Vec<usize> = (0..d2.component_count())
        .filter(|&i| d2.component(i).len() >= 2)
        .collect();
    if comps.is_empty() {
        return out;
    }
    let comp = comps[rng.gen_range(0..comps.len())];
    let shift = rng.gen_range(1..d2.component(comp).len());
    let rebase = MoveSpec::Rebase { comp, shift };
    let d3 = apply_move(&d2, &rebase).expect("rebase applies");
    let count = rng.gen_range(0..=30);
    let (d4, trace2) = random_moves(&d3, count, rng.gen());
    let ta = MilnorTable::new(&d, 4).expect("valid order");
    let tb = MilnorTable::new(&d4, 4).expect("valid order");
    for (a, b) in ta.records().into_iter().zip(tb.records()) {
        if (a.delta.clone(), a.mubar.clone()) != (b.delta.clone(), b.mubar.clone()) {
            let mut all = trace.clone();
            all.push(rebase.clone());
            all.extend(trace2.iter().cloned());
            out.push(json!({
                "diagram": d.to_gauss(),
                "moves": all,
                "seq": seq1(&a.seq),
                "before": format!("Delta={} mubar={}", a.delta, a.mubar),
                "after": format!("Delta={} mubar={}", b.delta, b.mubar),
            }));
        }
    }
    out
}

fn wk(rng: &mut ChaCha8Rng, k: usize, self_only: bool) -> Vec<Value> {
    let d = small_diagram(rng, 1, 6);
    let tree = random_wk_tree(&d, k, self_only, rng.gen());
    let p = add_tree(&from_diagram(&d), &tree).expect("random trees are valid");
    let d2 = surgery(&p).expect("random trees avoid existing ends");
    let found = if self_only {
        compare_mu(&d, &d2, 4, |s| max_multiplicity(s) <= k)
    } else {
        compare_mu(&d, &d2, k, |_| true)
    };
    tag(found, json!({"diagram": d.to_gauss(), "k": k, "arrows": p.to_text()}))
}

fn homotopy(rng: &mut ChaCha8Rng) -> Vec<Value> {
    let d = small_diagram(rng, 2, 8);
    let mut selfs: Vec<u32> = d
        .crossings()
        .into_iter()
        .filter(|(_, c)| c.over.comp == c.under.comp)
        .map(|(id, _)| id)
        .collect();
    selfs.sort_unstable();
    let mut changed = Vec::new();
    let mut d2 = d.clone();
    for id in selfs {
        if rng.gen() {
            let m = MoveSpec::CrossingChange { crossing: id };
            d2 = apply_move(&d2, &m).expect("crossing changes always apply");
            changed.push(m);
        }
    }
    let n = d.component_count();
    tag(
        compare_mu(&d, &d2, n, |s| max_multiplicity(s) <= 1),
        json!({"diagram": d.to_gauss(), "moves": changed}),
    )
}
