//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use looplab::catalog::{self, elementary_abelian, o16, q8, smallest_cc};
use looplab::enumerate::{enumerate, EnumerationJob, Filter};
use looplab::identities::{is_moufang, MoufangVariant};
use looplab::probability::{p_assoc, p_assoc_decomposed, p_comm};
use looplab::structure::{
    all_subloops, associator, cosets, is_associative_subset, is_pseudo_automorphism, is_subloop,
    nucleus, partial_set, pseudo_l, quotient, subloop_closure, NucleusKind, Side,
};
use looplab::table::isomorphic;
use looplab::theorems::{has_nuclear_commutators, verify_moufang_theorem};
use looplab::{ElementSet, ExactFraction, LoopTable};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_loops(n: usize) -> Vec<LoopTable> {
    enumerate(&EnumerationJob::new(n)).expect("enumeration").0
}

fn catalog_loops() -> Vec<LoopTable> {
    let mut v: Vec<LoopTable> = catalog::NAMES
        .iter()
        .map(|n| catalog::lookup(n).unwrap().table)
        .collect();
    for n in 1..=8 {
        v.push(catalog::cyclic(n).unwrap().table);
    }
    v.push(elementary_abelian(8).unwrap().table);
    v
}

fn corpus() -> Vec<LoopTable> {
    let mut v = catalog_loops();
    for n in 1..=6 {
        v.extend(all_loops(n));
    }
    v
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let p = p_assoc(&o16().table);
    let took = start.elapsed();
    check(p == ExactFraction::new(43, 64), format!("p_assoc = {p}"))?;
    check(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!("p_assoc(O16) = {p} in {took:?}"))
}

fn criterion_2() -> Outcome {
    let t = &o16().table;
    let n = nucleus(t, NucleusKind::Full);
    check(n.len() == 2, format!("|N| = {}", n.len()))?;
    let c = cosets(t, &n, Side::Left).map_err(|e| e.to_string())?;
    check(
        c.partition && c.index == Some(8),
        format!("index {:?}", c.index),
    )?;
    let q = quotient(t, &n).map_err(|e| e.to_string())?;
    let target = elementary_abelian(8).unwrap().table;
    let iso = isomorphic(&q.table, &target).map_err(|e| e.to_string())?;
    check(iso.is_some(), "quotient not elementary abelian")?;
    check(has_nuclear_commutators(t), "commutators escape the nucleus")?;
    Ok(format!(
        "N = {{{n}}}, index 8, G/N ≅ (Z2)^3, nuclear commutators"
    ))
}

fn criterion_3() -> Outcome {
    let p = p_comm(&q8().table);
    check(p == ExactFraction::new(5, 8), format!("p_comm = {p}"))?;
    Ok(format!("p_comm(Q8) = {p}"))
}

fn criterion_4() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let job = EnumerationJob::new(6)
        .filter(Filter::Cc)
        .filter(Filter::Nonassociative);
    let (found, summary) = pool
        .install(|| enumerate(&job))
        .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    check(!found.is_empty(), "no nonassociative CC loop of order 6")?;
    let bound = ExactFraction::new(7, 8);
    let ps: Vec<ExactFraction> = found.iter().map(p_assoc).collect();
    check(ps.iter().all(|p| *p <= bound), "a loop exceeds 7/8")?;
    let attaining = ps.iter().filter(|p| **p == bound).count();
    check(attaining > 0, "bound never attained")?;
    check(
        found.contains(&smallest_cc().table),
        "catalog smallest_cc missing from the enumeration",
    )?;
    check(took < Duration::from_secs(300), format!("took {took:?}"))?;
    Ok(format!(
        "{} loops ({summary}), {attaining} attain 7/8, single thread in {took:?}",
        found.len()
    ))
}

fn criterion_5(corpus: &[LoopTable]) -> Outcome {
    for t in corpus {
        let (parts, frac) = p_assoc_decomposed(t);
        check(
            frac == p_assoc(t) && parts.fraction() == frac,
            format!("mismatch on {:?}", t.magma().products()),
        )?;
    }
    Ok(format!("{} tables, decomposition exact", corpus.len()))
}

fn criterion_6(corpus: &[LoopTable]) -> Outcome {
    let mut moufang = 0;
    for t in corpus {
        let v: Vec<bool> = [
            MoufangVariant::One,
            MoufangVariant::Two,
            MoufangVariant::Three,
        ]
        .iter()
        .map(|&m| is_moufang(t, m).holds)
        .collect();
        check(
            v.iter().all(|&b| b == v[0]),
            format!("verdicts {v:?} on {:?}", t.magma().products()),
        )?;
        moufang += v[0] as usize;
    }
    Ok(format!("{} tables agree ({moufang} Moufang)", corpus.len()))
}

fn criterion_7() -> Outcome {
    let t = &o16().table;
    for x in t.elements() {
        for y in t.elements() {
            let l = pseudo_l(t, x, y);
            let c = looplab::structure::commutator(t, y, x);
            check(l.companion == c, format!("companion at ({x},{y})"))?;
            check(
                is_pseudo_automorphism(t, &l.map, c),
                format!("law fails at ({x},{y})"),
            )?;
            let fixed = ElementSet::from_elements(t.order(), l.map.fixed_points());
            let d = partial_set(t, x, y);
            check(fixed == d, format!("fixed points differ at ({x},{y})"))?;
            check(is_subloop(t, &d), format!("∂ not a subloop at ({x},{y})"))?;
            for z in t.elements() {
                check(
                    t.mul(l.map.apply(z), associator(t, z, y, x)) == z,
                    format!("L(z)[z,y,x] != z at ({x},{y},{z})"),
                )?;
            }
        }
    }
    Ok("all 256 pairs pass the four checks".into())
}

fn moufang_theorem_direct(t: &LoopTable) -> Result<usize, String> {
    let e = t.identity();
    let mut trivial = 0;
    for a in t.elements() {
        for b in t.elements() {
            for c in t.elements() {
                if associator(t, a, b, c) != e {
                    continue;
                }
                trivial += 1;
                let perms = [
                    (a, b, c),
                    (a, c, b),
                    (b, a, c),
                    (b, c, a),
                    (c, a, b),
                    (c, b, a),
                ];
                check(
                    perms.iter().all(|&(p, q, r)| associator(t, p, q, r) == e),
                    format!("permutation of ({a},{b},{c}) associates nontrivially"),
                )?;
                let g = subloop_closure(t, &ElementSet::from_elements(t.order(), [a, b, c]));
                check(
                    is_associative_subset(t, &g),
                    format!("<{a},{b},{c}> is not associative"),
                )?;
            }
        }
    }
    Ok(trivial)
}

fn criterion_8() -> Outcome {
    let mut loops = vec![o16().table.clone()];
    for n in 1..=6 {
        loops.extend(
            all_loops(n)
                .into_iter()
                .filter(|t| is_moufang(t, MoufangVariant::One).holds),
        );
    }
    let mut triples = 0;
    for t in &loops {
        triples += moufang_theorem_direct(t)?;
        let v = verify_moufang_theorem(t).map_err(|e| e.to_string())?;
        check(v.applicable && v.verified, "theorem verifier disagrees")?;
    }
    Ok(format!(
        "{} Moufang loops, {triples} trivial triples",
        loops.len()
    ))
}

fn lagrange(t: &LoopTable) -> Result<usize, String> {
    let subs = all_subloops(t).map_err(|e| e.to_string())?;
    let n = t.order();
    for s in &subs {
        check(
            n.is_multiple_of(s.len()),
            format!("subloop of order {} in order {n}", s.len()),
        )?;
        check(
            s.len() == n || 2 * s.len() <= n,
            format!("proper subloop of order {} exceeds n/2", s.len()),
        )?;
    }
    Ok(subs.len())
}

fn criterion_9() -> Outcome {
    let o = lagrange(&o16().table)?;
    let cc6 = enumerate(&EnumerationJob::new(6).filter(Filter::Cc))
        .map_err(|e| e.to_string())?
        .0;
    check(!cc6.is_empty(), "no CC loops of order 6")?;
    let mut total = 0;
    for t in &cc6 {
        total += lagrange(t)?;
    }
    Ok(format!(
        "O16: {o} subloops; {} order-6 CC loops: {total} subloops",
        cc6.len()
    ))
}

fn criterion_10() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=5 {
        let oracle = common::oracle_classes(n)?;
        let (found, _) =
            enumerate(&EnumerationJob::new(n).up_to_iso(true)).map_err(|e| e.to_string())?;
        check(
            found.len() == oracle,
            format!("order {n}: enumerator {} vs oracle {oracle}", found.len()),
        )?;
        counts.push(oracle.to_string());
    }
    Ok(format!("orders 1-5: {}", counts.join(", ")))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "Moufang bound sharp on O16", criterion_1()),
        (2, "O16 nucleus, index and quotient", criterion_2()),
        (3, "Q8 commuting probability", criterion_3()),
        (4, "CC bound sharp at order 6", criterion_4()),
        (5, "decomposition oracle", criterion_5(&corpus)),
        (6, "Moufang identity equivalence", criterion_6(&corpus)),
        (7, "fixed-point lemma on O16", criterion_7()),
        (8, "Moufang's theorem spot check", criterion_8()),
        (9, "Lagrange sweeps", criterion_9()),
        (10, "enumeration ground truth", criterion_10()),
    ];
    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
