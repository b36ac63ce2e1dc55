//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{coefficient, corpus, fixture, RawDiagram};
use milnor_core::arrow::{add_tree, from_diagram, random_wk_tree, surgery};
use milnor_core::cut2d::{parse_cut, parse_cut_str, tube_from_diagram, ComponentDoc, CutDiagram, CutDocument, NuTable};
use milnor_core::gauss::{apply_move, random_diagram, random_moves, BasedDiagram, MoveSpec};
use milnor_core::milnor::{
    all_sequences, chen_series, chen_words, delta_and_mubar, longitude_words, max_multiplicity, mu, phi_q,
    MilnorTable, WordGuard,
};
use milnor_core::series::{in_gamma_q, magnus_expand};
use milnor_core::word::{left_normed_commutator, FreeWord, Letter};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn parse(text: &str) -> BasedDiagram {
    BasedDiagram::parse(text).expect("fixture parses")
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> FreeWord<usize> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| Letter::new(rng.gen_range(0..n), rng.gen()))
        .collect()
}

fn small_diagram(rng: &mut ChaCha8Rng, min_n: usize, max_crossings: usize) -> BasedDiagram {
    let n = rng.gen_range(min_n..=3);
    let c = rng.gen_range(0..=max_crossings);
    random_diagram(rng, n, c)
}

/// Sequences `J` obtained by deleting at least one index of `seq` and
/// rotating; enumerated naively with duplicates.
fn naive_subsequences(seq: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1..(1u32 << seq.len()) - 1 {
        let sub: Vec<usize> = (0..seq.len()).filter(|b| mask >> b & 1 == 1).map(|b| seq[b]).collect();
        for r in 0..sub.len() {
            let mut rot = sub.clone();
            rot.rotate_left(r);
            out.push(rot);
        }
    }
    out
}

fn magnus_axioms() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..1000 {
        let n = rng.gen_range(1..=4);
        let q = rng.gen_range(1..=6);
        let g = random_word(&mut rng, n, 12);
        let h = random_word(&mut rng, n, 12);
        let eg = magnus_expand(&g, n, q).unwrap();
        let eh = magnus_expand(&h, n, q).unwrap();
        let egh = magnus_expand(&g.concat(&h), n, q).unwrap();
        ensure(egh == eg.try_mul(&eh).unwrap(), || format!("case {case}: E(gh) != E(g)E(h) for g={g} h={h}"))?;
        let inv = magnus_expand(&g.inverse(), n, q).unwrap();
        ensure(eg.try_mul(&inv).unwrap().is_one(), || format!("case {case}: E(g)E(g^-1) != 1 for g={g}"))?;
        // one monomial against the independent expansion
        let deg = rng.gen_range(0..=q);
        let m: Vec<usize> = (0..deg).map(|_| rng.gen_range(0..n)).collect();
        let raw: Vec<i64> = g
            .letters()
            .iter()
            .map(|l| (l.gen as i64 + 1) * l.exponent() as i64)
            .collect();
        ensure(eg.coefficient(&m) == coefficient(&raw, &m), || format!("case {case}: coefficient {m:?} of {g}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("1000 pairs in {t:.2?}"))
}

fn tuples(n: usize, len: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for g in 0..n {
        if !prefix.contains(&g) {
            prefix.push(g);
            tuples(n, len, prefix, out);
            prefix.pop();
        }
    }
}

fn gamma_detection() -> Check {
    let mut count = 0;
    for n in 2..=5 {
        for len in 2..=n.min(5) {
            if n == 5 && len < 5 {
                continue;
            }
            let mut all = Vec::new();
            tuples(n, len, &mut Vec::new(), &mut all);
            for gens in all {
                let w = left_normed_commutator(&gens);
                ensure(in_gamma_q(&w, len), || format!("{w} not detected in Gamma_{len}"))?;
                ensure(!in_gamma_q(&w, len + 1), || format!("{w} wrongly in Gamma_{}", len + 1))?;
                let raw: Vec<i64> = w.letters().iter().map(|l| (l.gen as i64 + 1) * l.exponent() as i64).collect();
                let lead = coefficient(&raw, &gens);
                ensure(lead.abs() == big(1), || format!("{w}: leading coefficient {lead}"))?;
                let series = magnus_expand(&w, n, len).unwrap();
                ensure(series.coefficient(&gens) == lead, || format!("{w}: engine and oracle disagree"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} commutators"))
}

fn linking_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nonzero = 0;
    for case in 0..200 {
        let d = small_diagram(&mut rng, 1, 10);
        let raw = RawDiagram::parse(&d.to_gauss());
        let t = MilnorTable::new(&d, 2).unwrap();
        for i in 0..d.component_count() {
            for k in 0..d.component_count() {
                let got = t.mu(&[i, k]).unwrap();
                let want = if i == k { big(0) } else { big(raw.linking(i, k)) };
                ensure(got == want, || format!("case {case} mu({}{}) = {got}, oracle {want}\n{d}", i + 1, k + 1))?;
                if !got.is_zero() {
                    nonzero += 1;
                }
            }
        }
    }
    Ok(format!("200 diagrams, {nonzero} nonzero linking numbers"))
}

fn fixture_values() -> Check {
    // oracle first
    let hopf_raw = RawDiagram::parse(&fixture("hopf.gauss"));
    ensure(hopf_raw.mu(&[0, 1]) == big(1), || "oracle: Hopf mu(12) != 1".into())?;
    let kink_raw = RawDiagram::parse(&fixture("kink.gauss"));
    for len in 1..=4 {
        for s in all_sequences(1, len) {
            ensure(kink_raw.mu(&s).is_zero(), || format!("oracle: kink mu{s:?} != 0"))?;
        }
    }
    let bor_raw = RawDiagram::parse(&fixture("borromean.gauss"));
    for s in all_sequences(3, 2) {
        ensure(bor_raw.mu(&s).is_zero(), || format!("oracle: Borromean mu{s:?} != 0"))?;
    }
    let bor123 = bor_raw.mu(&[0, 1, 2]);
    ensure(bor123.abs() == big(1), || format!("oracle: Borromean mu(123) = {bor123}"))?;
    let clasp_raw = RawDiagram::parse(&fixture("double_clasp.gauss"));
    ensure(clasp_raw.mu(&[0, 1]) == big(2) && clasp_raw.mu(&[1, 0]) == big(2), || {
        "oracle: double clasp linking != 2".into()
    })?;
    let oracle_delta = naive_subsequences(&[0, 0, 1])
        .iter()
        .fold(BigInt::zero(), |g, j| g.gcd(&clasp_raw.mu(j)));
    ensure(oracle_delta == big(2), || format!("oracle: Delta(112) = {oracle_delta}"))?;

    // then the engine
    let hopf = parse(&fixture("hopf.gauss"));
    let r = delta_and_mubar(&hopf, &[0, 1]).unwrap();
    ensure((r.mu.clone(), r.delta.clone()) == (big(1), big(0)), || format!("Hopf: {r:?}"))?;
    let kink = parse(&fixture("kink.gauss"));
    ensure(
        MilnorTable::new(&kink, 4).unwrap().all_mu().iter().all(|(_, v)| v.is_zero()),
        || "kink has a nonzero mu".into(),
    )?;
    let bor = parse(&fixture("borromean.gauss"));
    let r = delta_and_mubar(&bor, &[0, 1, 2]).unwrap();
    ensure(r.delta.is_zero() && r.mubar.abs() == big(1) && r.mu == bor123, || format!("Borromean: {r:?}"))?;
    let clasp = parse(&fixture("double_clasp.gauss"));
    let r = delta_and_mubar(&clasp, &[0, 0, 1]).unwrap();
    ensure(r.delta == big(2) && r.mu == clasp_raw.mu(&[0, 0, 1]), || format!("double clasp: {r:?}"))?;
    Ok(format!("mu(123) = {bor123}, Delta(112) = 2"))
}

fn move_invariance() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut rebased, mut nontrivial) = (0, 0);
    for case in 0..500 {
        let d = small_diagram(&mut rng, 1, 8);
        let count = rng.gen_range(0..=30);
        let (d2, trace) = random_moves(&d, count, rng.gen());
        let a = MilnorTable::new(&d, 4).unwrap();
        let b = MilnorTable::new(&d2, 4).unwrap();
        ensure(a.all_mu() == b.all_mu(), || format!("case {case}: mu changed\n{d}{trace:?}"))?;
        if a.all_mu().iter().any(|(_, v)| !v.is_zero()) {
            nontrivial += 1;
        }
        let comps: Vec<usize> = (0..d2.component_count())
            .filter(|&i| d2.component(i).len() >= 2)
            .collect();
        if comps.is_empty() {
            continue;
        }
        let comp = comps[rng.gen_range(0..comps.len())];
        let shift = rng.gen_range(1..d2.component(comp).len());
        let d3 = apply_move(&d2, &MoveSpec::Rebase { comp, shift }).unwrap();
        let count = rng.gen_range(0..=30);
        let (d4, _) = random_moves(&d3, count, rng.gen());
        let key = |t: MilnorTable| -> Vec<_> { t.records().into_iter().map(|r| (r.seq, r.delta, r.mubar)).collect() };
        ensure(key(a) == key(MilnorTable::new(&d4, 4).unwrap()), || {
            format!("case {case}: (Delta, mubar) changed after rebase\n{d}")
        })?;
        rebased += 1;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("500 traces ({nontrivial} with nonzero mu), {rebased} rebased, {t:.2?}"))
}

fn q_stability() -> Check {
    let mut diagrams: Vec<(String, BasedDiagram)> = corpus()
        .into_iter()
        .map(|(name, text)| (name.to_string(), parse(&text)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..20 {
        diagrams.push((format!("random{i}"), small_diagram(&mut rng, 2, 8)));
    }
    let mut compared = 0;
    for (name, d) in &diagrams {
        let tables: Vec<MilnorTable> = (1..=6).map(|q| MilnorTable::new(d, q).unwrap()).collect();
        for len in 1..=3 {
            for s in all_sequences(d.component_count(), len) {
                let base = tables[len - 1].mu(&s).unwrap();
                for q in len + 1..=len + 3 {
                    let v = tables[q - 1].mu(&s).unwrap();
                    ensure(v == base, || format!("{name}: mu{s:?} = {base} at order {len}, {v} at order {q}"))?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} comparisons over {} diagrams", diagrams.len()))
}

/// Surgery along a random tree on a random diagram.
fn tree_pair(rng: &mut ChaCha8Rng, k: usize, self_only: bool) -> (BasedDiagram, BasedDiagram) {
    let d = small_diagram(rng, 1, 6);
    let t = random_wk_tree(&d, k, self_only, rng.gen());
    let d2 = surgery(&add_tree(&from_diagram(&d), &t).unwrap()).unwrap();
    (d, d2)
}

fn wk_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut moved_next = 0;
    for case in 0..100 {
        let k = [2, 3, 4][case % 3];
        let (d, d2) = tree_pair(&mut rng, k, false);
        let a = MilnorTable::new(&d, k + 1).unwrap();
        let b = MilnorTable::new(&d2, k + 1).unwrap();
        let n = d.component_count();
        for len in 1..=k {
            for s in all_sequences(n, len) {
                ensure(a.mu(&s).unwrap() == b.mu(&s).unwrap(), || format!("case {case} k={k}: mu{s:?} changed\n{d}"))?;
            }
        }
        if all_sequences(n, k + 1).iter().any(|s| a.mu(s).unwrap() != b.mu(s).unwrap()) {
            moved_next += 1;
        }
    }
    Ok(format!("100 surgeries; {moved_next} change some mu of length k+1"))
}

fn self_wk_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..100 {
        let k = [1, 2, 3][case % 3];
        let (d, d2) = tree_pair(&mut rng, k, true);
        let a = MilnorTable::new(&d, 4).unwrap();
        let b = MilnorTable::new(&d2, 4).unwrap();
        for (s, v) in a.all_mu() {
            if max_multiplicity(&s) <= k {
                ensure(b.mu(&s).unwrap() == v, || format!("case {case} k={k}: mu{s:?} changed\n{d}"))?;
            }
        }
    }
    let mut changed_crossings = 0;
    for case in 0..100 {
        let d = small_diagram(&mut rng, 2, 8);
        let mut selfs: Vec<u32> = d
            .crossings()
            .into_iter()
            .filter(|(_, c)| c.over.comp == c.under.comp)
            .map(|(id, _)| id)
            .collect();
        selfs.sort_unstable();
        let mut d2 = d.clone();
        for id in selfs {
            d2 = apply_move(&d2, &MoveSpec::CrossingChange { crossing: id }).unwrap();
            changed_crossings += 1;
        }
        let n = d.component_count();
        let a = MilnorTable::new(&d, n).unwrap();
        let b = MilnorTable::new(&d2, n).unwrap();
        for (s, v) in a.all_mu() {
            if max_multiplicity(&s) == 1 {
                ensure(b.mu(&s).unwrap() == v, || format!("self-crossing case {case}: mu{s:?} changed\n{d}"))?;
            }
        }
    }
    Ok(format!("100 self-tree surgeries, {changed_crossings} self-crossing changes"))
}

fn phi_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut same, mut differ) = (0, 0);
    for case in 0..150 {
        let (d, d2) = match case % 3 {
            0 => {
                let d = small_diagram(&mut rng, 1, 6);
                let count = rng.gen_range(0..=20);
                let (d2, _) = random_moves(&d, count, rng.gen());
                (d, d2)
            }
            1 => {
                let k = rng.gen_range(1..=3);
                tree_pair(&mut rng, k, false)
            }
            _ => {
                let d = small_diagram(&mut rng, 1, 6);
                if d.crossing_count() == 0 {
                    continue;
                }
                let mut ids: Vec<u32> = d.crossings().into_keys().collect();
                ids.sort_unstable();
                let id = ids[rng.gen_range(0..ids.len())];
                let d2 = apply_move(&d, &MoveSpec::CrossingChange { crossing: id }).unwrap();
                (d, d2)
            }
        };
        let a = MilnorTable::new(&d, 3).unwrap().all_mu();
        let b = MilnorTable::new(&d2, 3).unwrap().all_mu();
        for q in 2..=4 {
            let eq_mu = a.iter().zip(&b).filter(|(x, _)| x.0.len() < q).all(|(x, y)| x == y);
            let eq_phi = phi_q(&d, q).unwrap() == phi_q(&d2, q).unwrap();
            ensure(eq_mu == eq_phi, || {
                format!("case {case} q={q}: mu equal {eq_mu}, phi equal {eq_phi}\n{d}---\n{d2}")
            })?;
            if eq_mu {
                same += 1;
            } else {
                differ += 1;
            }
        }
    }
    ensure(same > 0 && differ > 0, || format!("degenerate corpus: {same} equal, {differ} different"))?;
    Ok(format!("{same} equal pairs, {differ} different pairs"))
}

fn engine_equivalence() -> Check {
    let mut arcs = 0;
    for (name, text) in corpus() {
        let d = parse(&text);
        let raw = RawDiagram::parse(&text);
        let n = d.component_count();
        for q in 1..=5 {
            let words = chen_words(&d, q, WordGuard::default()).map_err(|e| format!("{name} q={q}: {e}"))?;
            let series = chen_series(&d, q).unwrap();
            let oracle = raw.eta(q);
            for (a, s) in series.iter() {
                let w = words.get(a);
                ensure(&magnus_expand(w, n, q).unwrap() == s, || format!("{name} q={q} arc {a:?}"))?;
                let lit: Vec<i64> = w.letters().iter().map(|l| (l.gen as i64 + 1) * l.exponent() as i64).collect();
                ensure(lit == oracle[a.comp][a.index], || format!("{name} q={q} arc {a:?}: word differs from oracle"))?;
                arcs += 1;
            }
        }
    }
    Ok(format!("{arcs} arc/order pairs"))
}

fn sphere_diagram() -> CutDiagram {
    // two spheres; the first is cut in two by an arc labeled by the second
    let doc: CutDocument = serde_json::from_str(
        r#"{
            "components": [
                {"genus": 0, "regions": ["p", "r"], "base": "p", "loops": []},
                {"genus": 0, "regions": ["s"], "base": "s", "loops": []}
            ],
            "arcs": [{"id": 1, "label": {"comp": 2, "region": "s"},
                      "front": {"comp": 1, "region": "p"}, "back": {"comp": 1, "region": "r"}}],
            "paths": {"1/r": [{"arc": 1, "sign": 1}]}
        }"#,
    )
    .unwrap();
    parse_cut(&doc).unwrap()
}

fn cut_suite() -> Check {
    let empty = CutDocument {
        components: (0..3)
            .map(|_| ComponentDoc {
                genus: 0,
                regions: vec!["a".into()],
                base: "a".into(),
                loops: vec![],
            })
            .collect(),
        arcs: vec![],
        paths: Default::default(),
    };
    for c in [parse_cut(&empty).unwrap(), sphere_diagram(), tube_from_diagram(&BasedDiagram::trivial(3))] {
        for r in NuTable::new(&c, 4).records() {
            ensure(r.m.is_zero() && r.delta.is_zero() && r.nu.is_zero(), || format!("trivial: {r:?}"))?;
        }
    }
    let hopf = parse_cut_str(&fixture("tube_hopf.cutd")).unwrap();
    let r = NuTable::new(&hopf, 2).record(&[0, 1]).unwrap();
    ensure((r.m.clone(), r.delta.clone(), r.nu.clone()) == (big(1), big(0), big(1)), || format!("tube of Hopf: {r:?}"))?;

    let mut two: Vec<BasedDiagram> = corpus()
        .into_iter()
        .map(|(_, t)| parse(&t))
        .filter(|d| d.component_count() == 2)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let c = rng.gen_range(0..=8);
        two.push(random_diagram(&mut rng, 2, c));
    }
    let mut compared = 0;
    for d in &two {
        let t = NuTable::new(&tube_from_diagram(d), 4);
        for r in MilnorTable::new(d, 4).unwrap().records() {
            let want = r.mu.gcd(&r.delta);
            let got = t.record(&r.seq).unwrap().nu;
            ensure(got == want, || format!("tube of\n{d}nu{:?} = {got}, expected {want}", r.seq))?;
            compared += 1;
        }
    }
    let mut rebased = 0;
    let mut bases: Vec<CutDiagram> = two.iter().take(12).map(tube_from_diagram).collect();
    bases.push(tube_from_diagram(&parse(&fixture("borromean.gauss"))));
    for c in &bases {
        let key = |c: &CutDiagram| -> Vec<_> {
            NuTable::new(c, 4).records().into_iter().map(|r| (r.seq, r.delta, r.nu)).collect()
        };
        let base = key(c);
        for (i, comp) in c.components.iter().enumerate() {
            for j in 1..comp.regions.len() {
                let moved = c.rebase(i, j).map_err(|e| e.to_string())?;
                ensure(key(&moved) == base, || format!("rebase {i}/{j} changed (Delta, nu)"))?;
                rebased += 1;
            }
        }
    }
    Ok(format!("{compared} tube comparisons, {rebased} re-encodings"))
}

fn performance() -> Check {
    let d = parse(&fixture("perf12.gauss"));
    ensure(d.crossing_count() == 12 && d.component_count() == 3, || "perf fixture shape".into())?;
    let start = Instant::now();
    let table = MilnorTable::new(&d, 8).unwrap();
    let values = table.all_mu();
    let t = start.elapsed();
    ensure(values.len() == (1..=8).map(|l| 3usize.pow(l)).sum::<usize>(), || "missing sequences".into())?;
    ensure(t < Duration::from_secs(60), || format!("series engine took {t:?}"))?;
    ensure(mu(&d, &[0, 1]).unwrap() == table.mu(&[0, 1]).unwrap(), || "table disagrees with mu".into())?;
    for q in 10..=12 {
        let err = chen_words(&d, q, WordGuard::default());
        ensure(err.is_err(), || format!("word engine finished at q={q}"))?;
        ensure(longitude_words(&d, q, WordGuard::default()).is_err(), || format!("longitudes finished at q={q}"))?;
    }
    Ok(format!("{} mu values in {t:.2?}; word guard trips for q = 10..12", values.len()))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 12] = [
        ("Magnus axioms", magnus_axioms),
        ("Gamma_q detection", gamma_detection),
        ("linking oracle", linking_oracle),
        ("fixture values", fixture_values),
        ("welded-move invariance", move_invariance),
        ("q-stability", q_stability),
        ("W_k surgery invariance", wk_invariance),
        ("self-W_k and link-homotopy invariance", self_wk_invariance),
        ("phi_q versus mu", phi_equivalence),
        ("engine equivalence", engine_equivalence),
        ("cut-diagram suite", cut_suite),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
