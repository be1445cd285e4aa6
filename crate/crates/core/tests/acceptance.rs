//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
//! if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use shortlist_core::manipulation::{cm_bloc, cm_egal, cm_egal_lex, cm_general, knapsack_exact_k, Manipulation};
use shortlist_core::oracle::{
    brute_cm, brute_cm_consistent, brute_tie, combinations, gen_perspective, gen_random, reduce_setcover_to_tie,
    reduce_tie_to_cm, RandomSpec, SetCoverInstance,
};
use shortlist_core::{
    apply_lex, evaluate, simulate_lex, tie_break, winners, Ballot, Behavior, CandidateId, CmInstance, Egroup,
    Election, EvalVariant, IntegerProgram, IpStatus, LexOrder, Relation, TiePerspective, TieRule, UtilityProfile,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names() -> Vec<String> {
    ["b1", "b2", "m1", "m2", "o1", "o2"].map(String::from).to_vec()
}

fn ballot(order: &[usize]) -> Ballot {
    Ballot::from_indices(order, 6).unwrap()
}

// b1=0 b2=1 m1=2 m2=3 o1=4 o2=5
fn manipulated_election() -> Election {
    Election::new(names(), vec![(ballot(&[4, 5, 0, 1, 2, 3]), 3), (ballot(&[0, 2, 1, 3, 4, 5]), 4)]).unwrap()
}

fn sincere_election() -> Election {
    Election::new(names(), vec![(ballot(&[4, 5, 2, 3, 0, 1]), 2), (ballot(&[3, 2, 1, 0, 4, 5]), 1)]).unwrap()
}

fn table() -> UtilityProfile {
    UtilityProfile::new(vec![vec![10, 5, 4, 0, 0, 0], vec![1, 2, 5, 7, 0, 0]]).unwrap()
}

fn all_rules(variant: EvalVariant, m: usize) -> Vec<TieRule> {
    vec![TieRule::Lexicographic(LexOrder::identity(m)), TieRule::Optimistic(variant), TieRule::Pessimistic(variant)]
}

fn c1_example_winners() -> Check {
    let e = manipulated_election();
    let p = table();
    for variant in EvalVariant::ALL {
        for rule in all_rules(variant, 6) {
            let bloc = winners(&e, 2, 2, &rule, Some(&p)).map_err(|e| e.to_string())?;
            ensure(bloc == Egroup::from_indices(&[0, 2]), || format!("Bloc under {rule:?}: {bloc:?}"))?;
            let sntv = winners(&e, 1, 2, &rule, Some(&p)).map_err(|e| e.to_string())?;
            ensure(sntv == Egroup::from_indices(&[0, 4]), || format!("SNTV under {rule:?}: {sntv:?}"))?;
        }
    }
    Ok("Bloc {b1, m1}, SNTV {o1, b1} under every rule".into())
}

fn c2_evaluations() -> Check {
    let s = Egroup::from_indices(&[0, 2]);
    let got: Vec<u64> = EvalVariant::ALL.iter().map(|&v| evaluate(&table(), &s, v).unwrap()).collect();
    let want = [(EvalVariant::Utilitarian, 20), (EvalVariant::Egalitarian, 6), (EvalVariant::CandidateWiseEgalitarian, 5)];
    for (v, value) in want {
        let actual = evaluate(&table(), &s, v).map_err(|e| e.to_string())?;
        ensure(actual == value, || format!("{v}: {actual}, expected {value}"))?;
    }
    Ok(format!("values {got:?}"))
}

fn c3_sntv_manipulation() -> Check {
    let util = EvalVariant::Utilitarian;
    let sincere = winners(&sincere_election(), 1, 2, &TieRule::Lexicographic(LexOrder::identity(6)), None)
        .map_err(|e| e.to_string())?;
    let sincere_value = evaluate(&table(), &sincere, util).unwrap();
    ensure(sincere == Egroup::from_indices(&[3, 4]) && sincere_value == 7, || {
        format!("sincere outcome {sincere:?} with value {sincere_value}")
    })?;
    for rule in all_rules(util, 6) {
        let inst = CmInstance::new(sincere_election(), 1, 2, table(), util, rule.clone()).unwrap();
        let m = cm_general(&inst).map_err(|e| e.to_string())?.ok_or("no manipulation")?;
        ensure(m.value == 11 && m.resulting_egroup == Egroup::from_indices(&[0, 4]), || {
            format!("{rule:?}: {:?} with value {}", m.resulting_egroup, m.value)
        })?;
        let replay = inst.outcome(&m.ballots).map_err(|e| e.to_string())?;
        ensure(replay == (m.resulting_egroup.clone(), 11), || format!("{rule:?}: witness replays to {replay:?}"))?;
    }
    Ok("sincere {o1, m2} = 7, manipulated {o1, b1} = 11, witnesses replay".into())
}

fn c4_non_simulability() -> Check {
    let t = table();
    let pending: Vec<CandidateId> = (0..4).map(CandidateId).collect();
    let egal = EvalVariant::Egalitarian;
    let rule = TieRule::Optimistic(egal);
    let p1 = TiePerspective::new(vec![], pending.clone(), 1, &t).unwrap();
    let p2 = TiePerspective::new(vec![], pending.clone(), 2, &t).unwrap();
    let o1 = tie_break(&p1, &rule).map_err(|e| e.to_string())?;
    let o2 = tie_break(&p2, &rule).map_err(|e| e.to_string())?;
    ensure(o1.egroup == Egroup::from_indices(&[2]) && o1.value == Some(4), || format!("k = 1: {o1:?}"))?;
    ensure(o2.egroup == Egroup::from_indices(&[0, 3]) && o2.value == Some(8), || format!("k = 2: {o2:?}"))?;

    let mut orders = 0;
    for perm in permutations(&[0, 1, 2, 3]) {
        let rank: Vec<usize> = perm.iter().copied().chain([4, 5]).collect();
        let order = LexOrder::from_indices(&rank).unwrap();
        let both = apply_lex(&p1, &order).unwrap() == o1.egroup && apply_lex(&p2, &order).unwrap() == o2.egroup;
        ensure(!both, || format!("order {rank:?} reproduces both choices"))?;
        orders += 1;
    }
    Ok(format!("({{m1}}, 4) and ({{b1, m2}}, 8); none of {orders} orders reproduces both"))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn c5_simulator() -> Check {
    let mut cases = 0;
    for seed in 0..250u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=3);
        let m = rng.gen_range(2..=6);
        let t = gen_perspective(seed, r, m, m, 3).map_err(|e| e.to_string())?;
        let p = t.perspective().unwrap();
        for variant in [EvalVariant::Utilitarian, EvalVariant::CandidateWiseEgalitarian] {
            for (behavior, rule) in
                [(Behavior::Optimistic, TieRule::Optimistic(variant)), (Behavior::Pessimistic, TieRule::Pessimistic(variant))]
            {
                let order = simulate_lex(&t.profile, variant, behavior).map_err(|e| e.to_string())?;
                let chosen = apply_lex(&p, &order).map_err(|e| e.to_string())?;
                let value = evaluate(&t.profile, &chosen, variant).unwrap();
                let (_, best) = brute_tie(&p, &rule, variant).map_err(|e| e.to_string())?;
                ensure(value == best, || format!("seed {seed} {rule:?}: simulated {value}, extremal {best}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases over 250 profiles"))
}

fn c6_tie_oracle() -> Check {
    let mut cases = 0;
    for seed in 0..600u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=3);
        let m = rng.gen_range(2..=10);
        let t = gen_perspective(seed, r, m, 8, 4).map_err(|e| e.to_string())?;
        let p = t.perspective().unwrap();
        for variant in EvalVariant::ALL {
            for rule in [TieRule::Optimistic(variant), TieRule::Pessimistic(variant)] {
                let fast = tie_break(&p, &rule).map_err(|e| e.to_string())?;
                let (_, value) = brute_tie(&p, &rule, variant).map_err(|e| e.to_string())?;
                ensure(fast.value == Some(value), || format!("seed {seed} {rule:?}: {:?} vs {value}", fast.value))?;
                let own = evaluate(&t.profile, &fast.egroup, variant).unwrap();
                ensure(own == value, || format!("seed {seed} {rule:?}: egroup evaluates to {own}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} comparisons over 600 perspectives"))
}

/// Instances of the criterion 7 ensemble; every third one has `ell = k`.
fn cm_spec(seed: u64) -> RandomSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(3..=6);
    let ell = rng.gen_range(1..=3.min(m - 1));
    let k = if seed % 3 == 0 { ell } else { rng.gen_range(1..=4.min(m - 1)) };
    RandomSpec { m, n: rng.gen_range(1..=5), r: rng.gen_range(1..=3), ell, k, max_utility: 3, seed }
}

fn cm_instances(seed: u64) -> Vec<CmInstance> {
    let spec = cm_spec(seed);
    let (election, profile) = gen_random(&spec).unwrap();
    let mut rank: Vec<usize> = (0..spec.m).collect();
    rank.shuffle(&mut ChaCha8Rng::seed_from_u64(!seed));
    let order = LexOrder::from_indices(&rank).unwrap();
    let mut out = Vec::new();
    for variant in EvalVariant::ALL {
        for rule in [TieRule::Lexicographic(order.clone()), TieRule::Optimistic(variant), TieRule::Pessimistic(variant)] {
            out.push(CmInstance::new(election.clone(), spec.ell, spec.k, profile.clone(), variant, rule).unwrap());
        }
    }
    out
}

const CM_INSTANCES: u64 = 600;

fn c7_cm_oracle() -> Check {
    let counts = (0..CM_INSTANCES)
        .into_par_iter()
        .map(|seed| -> Result<[usize; 4], String> {
            let mut counts = [0usize; 4];
            for inst in cm_instances(seed) {
                let oracle = brute_cm(&inst).map_err(|e| e.to_string())?.value;
                let mut compare = |slot: usize, name: &str, found: Option<Manipulation>| {
                    let found = found.ok_or_else(|| format!("seed {seed}: {name} found nothing"))?;
                    counts[slot] += 1;
                    ensure(found.value == oracle, || {
                        format!("seed {seed} {name} {:?} {:?}: {} vs oracle {oracle}", inst.variant, inst.rule, found.value)
                    })
                };
                match (inst.variant, &inst.rule) {
                    (EvalVariant::Egalitarian, TieRule::Lexicographic(_)) => {
                        compare(3, "cm_egal_lex", cm_egal_lex(&inst).map_err(|e| e.to_string())?)?
                    }
                    (EvalVariant::Egalitarian, _) => compare(2, "cm_egal", cm_egal(&inst).map_err(|e| e.to_string())?)?,
                    _ => {
                        compare(0, "cm_general", cm_general(&inst).map_err(|e| e.to_string())?)?;
                        if inst.ell == inst.k {
                            compare(1, "cm_bloc", cm_bloc(&inst).map_err(|e| e.to_string())?)?;
                        }
                    }
                }
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>, String>>()?;
    let total = counts.iter().fold([0; 4], |acc, c| [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2], acc[3] + c[3]]);
    Ok(format!(
        "{CM_INSTANCES} elections; cm_general {}, cm_bloc {}, cm_egal {}, cm_egal_lex {} comparisons",
        total[0], total[1], total[2], total[3]
    ))
}

fn c8_bloc_consistency() -> Check {
    let checked = (0..CM_INSTANCES)
        .into_par_iter()
        .filter(|&seed| {
            let spec = cm_spec(seed);
            spec.ell == spec.k
        })
        .map(|seed| -> Result<usize, String> {
            let mut n = 0;
            for inst in cm_instances(seed) {
                let all = brute_cm(&inst).map_err(|e| e.to_string())?.value;
                let consistent = brute_cm_consistent(&inst).map_err(|e| e.to_string())?.value;
                ensure(all == consistent, || {
                    format!("seed {seed} {:?} {:?}: consistent {consistent}, unrestricted {all}", inst.variant, inst.rule)
                })?;
                n += 1;
            }
            Ok(n)
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(format!("{} instances with ell = k", checked.iter().sum::<usize>()))
}

/// Every family of `count` subsets of a `u`-element universe, as a
/// non-decreasing sequence of bitmasks.
fn set_families(u: usize, count: usize) -> Vec<Vec<usize>> {
    let masks = 1usize << u;
    let mut out = Vec::new();
    let mut family = vec![0usize; count];
    loop {
        out.push(family.clone());
        let Some(i) = (0..count).rev().find(|&i| family[i] + 1 < masks) else { return out };
        family[i] += 1;
        for j in i + 1..count {
            family[j] = family[i];
        }
    }
}

fn c9_reductions() -> Check {
    let egal = EvalVariant::Egalitarian;
    let mut jobs = Vec::new();
    for u in 1..=4 {
        for count in 1..=5 {
            for family in set_families(u, count) {
                for h in 1..=count {
                    jobs.push((u, family.clone(), h));
                }
            }
        }
    }
    let covers = jobs
        .par_iter()
        .map(|(u, family, h)| -> Result<(), String> {
            let sets: Vec<Vec<usize>> = family.iter().map(|&mask| (0..*u).filter(|x| mask >> x & 1 == 1).collect()).collect();
            let sc = SetCoverInstance { universe_size: *u, sets, h: *h };
            let tie = reduce_setcover_to_tie(&sc).map_err(|e| e.to_string())?;
            let value = tie_break(&tie.perspective().unwrap(), &TieRule::Optimistic(egal))
                .map_err(|e| e.to_string())?
                .value
                .unwrap();
            ensure((value >= 1) == sc.has_cover(), || format!("{sc:?}: value {value}"))
        })
        .collect::<Result<Vec<_>, String>>()?
        .len();

    let mut reduced = 0;
    for seed in 0..120u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=2);
        let m = rng.gen_range(2..=5);
        let ell = rng.gen_range(1..=2);
        let t = gen_perspective(seed, r, m, 4, 3).map_err(|e| e.to_string())?;
        let p = t.perspective().unwrap();
        let (_, expected) = brute_tie(&p, &TieRule::Optimistic(egal), egal).map_err(|e| e.to_string())?;
        for rule in [TieRule::Optimistic(egal), TieRule::Pessimistic(egal), TieRule::Lexicographic(LexOrder::identity(m))] {
            let inst = reduce_tie_to_cm(&p, ell, &rule).map_err(|e| e.to_string())?;
            let got = brute_cm(&inst).map_err(|e| e.to_string())?.value;
            ensure(got == expected, || format!("seed {seed} ell {ell} {rule:?}: reduced {got}, original {expected}"))?;
            reduced += 1;
        }
    }
    Ok(format!("{covers} set cover instances; {reduced} reduced manipulation instances over 120 perspectives"))
}

struct RandomProgram {
    bounds: Vec<(i64, i64)>,
    rows: Vec<(Vec<i64>, Relation, i64)>,
    objective: Vec<i64>,
}

fn random_program(seed: u64) -> RandomProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let bounds = (0..n)
        .map(|_| {
            let lo = rng.gen_range(-3..=2);
            (lo, lo + rng.gen_range(0..=5))
        })
        .collect();
    let rows = (0..rng.gen_range(0..=4))
        .map(|_| {
            let coefs = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
            let rel = [Relation::Le, Relation::Ge, Relation::Eq][rng.gen_range(0..3)];
            (coefs, rel, rng.gen_range(-8..=8))
        })
        .collect();
    let objective = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    RandomProgram { bounds, rows, objective }
}

fn dot(a: &[i64], x: &[i64]) -> i64 {
    a.iter().zip(x).map(|(a, x)| a * x).sum()
}

fn satisfies(p: &RandomProgram, x: &[i64]) -> bool {
    p.bounds.iter().zip(x).all(|(&(lo, hi), &v)| lo <= v && v <= hi)
        && p.rows.iter().all(|(a, rel, b)| {
            let lhs = dot(a, x);
            match rel {
                Relation::Le => lhs <= *b,
                Relation::Ge => lhs >= *b,
                Relation::Eq => lhs == *b,
            }
        })
}

fn grid_optimum(p: &RandomProgram) -> Option<i64> {
    let mut x: Vec<i64> = p.bounds.iter().map(|b| b.0).collect();
    let mut best = None;
    loop {
        if satisfies(p, &x) {
            let v = dot(&p.objective, &x);
            best = Some(best.map_or(v, |b: i64| b.max(v)));
        }
        let Some(i) = (0..x.len()).find(|&i| x[i] < p.bounds[i].1) else { return best };
        x[i] += 1;
        for j in 0..i {
            x[j] = p.bounds[j].0;
        }
    }
}

fn c10_integer_programs() -> Check {
    let mut feasible = 0;
    for seed in 0..200u64 {
        let p = random_program(seed);
        let mut prog = IntegerProgram::new();
        let vars: Vec<_> = p
            .bounds
            .iter()
            .enumerate()
            .map(|(i, &(lo, hi))| prog.add_var(format!("x{i}"), lo, hi).unwrap())
            .collect();
        for (a, rel, b) in &p.rows {
            prog.add_constraint(vars.iter().copied().zip(a.iter().copied()), *rel, *b).unwrap();
        }
        prog.set_objective(vars.iter().copied().zip(p.objective.iter().copied())).unwrap();
        let sol = prog.solve().map_err(|e| e.to_string())?;
        let expected = grid_optimum(&p);
        match (sol.status(), expected) {
            (IpStatus::Infeasible, None) => {}
            (IpStatus::Optimal, Some(best)) => {
                let x = sol.assignment().unwrap();
                ensure(satisfies(&p, x), || format!("seed {seed}: assignment {x:?} violates a constraint"))?;
                let v = dot(&p.objective, x);
                ensure(v == best && sol.objective_value() == Some(best), || {
                    format!("seed {seed}: objective {v}, grid optimum {best}")
                })?;
                feasible += 1;
            }
            (status, best) => return Err(format!("seed {seed}: solver {status:?}, grid {best:?}")),
        }
    }
    Ok(format!("200 programs, {feasible} feasible"))
}

fn c11_knapsack() -> Check {
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=12);
        let items: Vec<(u64, u64)> = (0..n).map(|_| (rng.gen_range(0..=10), rng.gen_range(0..=20))).collect();
        let count = rng.gen_range(0..=n);
        let capacity = rng.gen_range(0..=40);
        let mut best: Option<u64> = None;
        for subset in combinations(n, count) {
            let (w, v) = subset.iter().fold((0, 0), |(w, v), &i| (w + items[i].0, v + items[i].1));
            if w <= capacity {
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
        let got = knapsack_exact_k(&items, count, capacity);
        ensure(got.as_ref().map(|g| g.0) == best, || format!("seed {seed}: {got:?} vs {best:?}"))?;
        if let Some((value, picked)) = got {
            let w: u64 = picked.iter().map(|&i| items[i].0).sum();
            let v: u64 = picked.iter().map(|&i| items[i].1).sum();
            ensure(picked.len() == count && w <= capacity && v == value, || format!("seed {seed}: bad selection {picked:?}"))?;
        }
    }
    Ok("200 item sets".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 11] = [
        ("example winners", Duration::from_secs(1), c1_example_winners),
        ("evaluation values", Duration::from_secs(1), c2_evaluations),
        ("SNTV manipulation example", Duration::from_secs(1), c3_sntv_manipulation),
        ("optimistic egalitarian tie-breaking is not lexicographic", Duration::from_secs(1), c4_non_simulability),
        ("lexicographic simulation of contractible rules", Duration::from_secs(30), c5_simulator),
        ("tie-breaking against brute force", Duration::from_secs(60), c6_tie_oracle),
        ("manipulation solvers against brute force", Duration::from_secs(600), c7_cm_oracle),
        ("consistent manipulation is optimal for Bloc", Duration::from_secs(600), c8_bloc_consistency),
        ("reductions", Duration::from_secs(60), c9_reductions),
        ("integer programs against grid enumeration", Duration::from_secs(10), c10_integer_programs),
        ("knapsack against subset enumeration", Duration::from_secs(10), c11_knapsack),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(detail) if elapsed <= limit => Ok(detail),
            Ok(_) => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
