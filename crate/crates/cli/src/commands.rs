use std::io::Write;

use anyhow::{bail, ensure, Context, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use shortlist_core::manipulation::{self, cm_bloc, cm_consistent};
use shortlist_core::oracle::{brute_cm, brute_cm_consistent, reduce_setcover_to_tie, reduce_tie_to_cm};
use shortlist_core::{
    evaluate, gen_random as generate, partition, score, tie_break, winners as find_winners, Ballot, CandidateId,
    CmInstance, Election, EvalVariant, LexOrder, RandomSpec, SetCoverInstance, TieRule, UtilityProfile,
};

use crate::io::{read_json, write_json, ElectionFile, Names, UtilityFile};
use crate::{
    CheckArgs, EvalArg, GenRandomArgs, GenSetcoverArgs, InstanceArgs, ManipulateArgs, SolverKind, TieKind,
    WinnersArgs, EXIT_MISMATCH, EXIT_THRESHOLD_UNMET,
};

/// Writes `value` to stdout; a closed pipe is not an error.
fn print(value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn variant(eval: EvalArg) -> EvalVariant {
    match eval {
        EvalArg::Util => EvalVariant::Utilitarian,
        EvalArg::Egal => EvalVariant::Egalitarian,
        EvalArg::Candegal => EvalVariant::CandidateWiseEgalitarian,
    }
}

fn tie_name(rule: &TieRule) -> &'static str {
    match rule {
        TieRule::Lexicographic(_) => "lex",
        TieRule::Optimistic(_) => "opt",
        TieRule::Pessimistic(_) => "pess",
    }
}

fn rule_for(tie: TieKind, eval: Option<EvalVariant>, order: LexOrder) -> Result<TieRule> {
    Ok(match tie {
        TieKind::Lex => TieRule::Lexicographic(order),
        TieKind::Opt => TieRule::Optimistic(eval.context("--tie opt requires --eval")?),
        TieKind::Pess => TieRule::Pessimistic(eval.context("--tie pess requires --eval")?),
    })
}

struct Loaded {
    election: Election,
    names: Names,
    profile: Option<UtilityProfile>,
    variant: Option<EvalVariant>,
    rule: TieRule,
}

fn load(args: &InstanceArgs) -> Result<Loaded> {
    let file: ElectionFile = read_json(&args.election)?;
    let (election, names) = file.to_election()?;
    let order = match &args.lex_order {
        Some(list) => LexOrder::new(names.ranking(list).context("--lex-order")?)?,
        None => LexOrder::identity(names.all().len()),
    };
    let variant = args.eval.map(variant);
    let rule = rule_for(args.tie, variant, order)?;
    let profile = match &args.utilities {
        Some(path) => Some(read_json::<UtilityFile>(path)?.to_profile(&names)?),
        None if args.tie != TieKind::Lex => bail!("--tie {} requires --utilities", tie_name(&rule)),
        None => None,
    };
    Ok(Loaded { election, names, profile, variant, rule })
}

pub fn winners(args: &WinnersArgs) -> Result<u8> {
    let inst = &args.instance;
    let loaded = load(inst)?;
    let names = &loaded.names;
    let scores = score(&loaded.election, inst.ell)?;
    let part = partition(&scores, inst.k)?;
    let egroup = find_winners(&loaded.election, inst.ell, inst.k, &loaded.rule, loaded.profile.as_ref())?;
    let value = match (&loaded.profile, loaded.variant) {
        (Some(profile), Some(v)) => Some(evaluate(profile, &egroup, v)?),
        _ => None,
    };
    let score_map: serde_json::Map<String, Value> =
        names.all().iter().zip(scores.as_slice()).map(|(n, &s)| (n.clone(), json!(s))).collect();
    print(&json!({
        "winners": names.list(egroup.members()),
        "scores": score_map,
        "partition": {
            "confirmed": names.list(&part.confirmed),
            "pending": names.list(&part.pending),
            "rejected": names.list(&part.rejected),
        },
        "value": value,
    }))?;
    Ok(0)
}

fn ballot_names(names: &Names, ballots: &[Ballot]) -> Vec<Vec<String>> {
    ballots.iter().map(|b| names.list(b.order())).collect()
}

pub fn manipulate(args: &ManipulateArgs) -> Result<u8> {
    let inst_args = &args.instance;
    let loaded = load(inst_args)?;
    let variant = loaded.variant.context("manipulate requires --eval")?;
    let profile = loaded.profile.context("manipulate requires --utilities")?;
    let m = loaded.election.num_candidates();
    let inst = CmInstance::new(loaded.election, inst_args.ell, inst_args.k, profile, variant, loaded.rule)?
        .with_threshold(args.threshold);
    let (value, egroup, ballots) = match args.solver {
        SolverKind::Fast => {
            let found = manipulation::solve(&inst)?.context("the solver found no manipulation")?;
            (found.value, found.resulting_egroup, found.ballots)
        }
        SolverKind::Oracle => {
            let found = brute_cm(&inst)?;
            let ballots = found.ballots(m)?;
            (found.value, found.egroup, ballots)
        }
    };
    let meets = inst.threshold.map_or(true, |q| value >= q);
    print(&json!({
        "value": value,
        "ballots": ballot_names(&loaded.names, &ballots),
        "winners": loaded.names.list(egroup.members()),
        "meets_threshold": meets,
    }))?;
    Ok(if meets { 0 } else { EXIT_THRESHOLD_UNMET })
}

struct Mismatch {
    trial: u64,
    solver: &'static str,
    inst: CmInstance,
    fast: Option<u64>,
    oracle: u64,
}

impl Mismatch {
    fn dump(&self) -> Value {
        let inst = &self.inst;
        let names = inst.election.names();
        let lex_order = match &inst.rule {
            TieRule::Lexicographic(order) => Some(order.rank().iter().map(|c| names[c.0].clone()).collect::<Vec<_>>()),
            _ => None,
        };
        json!({
            "trial": self.trial,
            "solver": self.solver,
            "election": ElectionFile::from_election(&inst.election),
            "utilities": UtilityFile::from_profile(&inst.profile, names),
            "ell": inst.ell,
            "k": inst.k,
            "eval": inst.variant.short_name(),
            "tie": tie_name(&inst.rule),
            "lex_order": lex_order,
            "fast_value": self.fast,
            "oracle_value": self.oracle,
        })
    }
}

fn check_trial(args: &CheckArgs, trial: u64) -> Result<(usize, Vec<Mismatch>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(trial));
    let m = rng.gen_range(2..=args.max_m);
    let spec = RandomSpec {
        m,
        n: rng.gen_range(0..=args.max_n),
        r: rng.gen_range(1..=args.max_r),
        ell: rng.gen_range(1..=args.max_ell.min(m - 1)),
        k: rng.gen_range(1..=args.max_k.min(m - 1)),
        max_utility: args.max_util,
        seed: rng.gen(),
    };
    let (election, profile) = generate(&spec)?;
    let mut rank: Vec<CandidateId> = election.candidates().collect();
    rank.shuffle(&mut rng);
    let order = LexOrder::new(rank)?;
    let fault = u64::from(args.inject_fault);

    let mut comparisons = 0;
    let mut mismatches = Vec::new();
    for variant in EvalVariant::ALL {
        for tie in [TieKind::Lex, TieKind::Opt, TieKind::Pess] {
            let rule = rule_for(tie, Some(variant), order.clone())?;
            let inst = CmInstance::new(election.clone(), spec.ell, spec.k, profile.clone(), variant, rule)?;
            let mut compare = |solver: &'static str, fast: Option<u64>, oracle: u64| {
                comparisons += 1;
                let fast = fast.map(|v| v + fault);
                if fast != Some(oracle) {
                    mismatches.push(Mismatch { trial, solver, inst: inst.clone(), fast, oracle });
                }
            };
            let oracle = brute_cm(&inst)?.value;
            compare("solve", manipulation::solve(&inst)?.map(|s| s.value), oracle);
            if variant != EvalVariant::Egalitarian {
                if spec.ell == spec.k {
                    compare("cm_bloc", cm_bloc(&inst)?.map(|s| s.value), oracle);
                }
                let consistent = brute_cm_consistent(&inst)?.value;
                compare("cm_consistent", cm_consistent(&inst)?.map(|s| s.value), consistent);
            }
        }
    }
    Ok((comparisons, mismatches))
}

pub fn check(args: &CheckArgs) -> Result<u8> {
    ensure!(args.max_m >= 2, "--max-m must be at least 2");
    ensure!(args.max_r >= 1, "--max-r must be at least 1");
    ensure!(args.max_ell >= 1 && args.max_k >= 1, "--max-ell and --max-k must be at least 1");
    let results = (0..args.trials).into_par_iter().map(|t| check_trial(args, t)).collect::<Result<Vec<_>>>()?;
    let comparisons: usize = results.iter().map(|(c, _)| c).sum();
    let mismatches: Vec<&Mismatch> = results.iter().flat_map(|(_, m)| m).collect();
    let mut summary = json!({
        "trials": args.trials,
        "comparisons": comparisons,
        "mismatches": mismatches.len(),
    });
    if let Some(first) = mismatches.first() {
        eprintln!(
            "mismatch in trial {}: {} found {:?}, exhaustive search {}",
            first.trial, first.solver, first.fast, first.oracle
        );
        summary["counterexample"] = first.dump();
    }
    print(&summary)?;
    Ok(if mismatches.is_empty() { 0 } else { EXIT_MISMATCH })
}

pub fn gen_random(args: &GenRandomArgs) -> Result<u8> {
    let spec = RandomSpec {
        m: args.m,
        n: args.n,
        r: args.r,
        ell: args.ell,
        k: args.k,
        max_utility: args.max_util,
        seed: args.seed,
    };
    let (election, profile) = generate(&spec)?;
    let election_file = ElectionFile::from_election(&election);
    let utility_file = UtilityFile::from_profile(&profile, election.names());
    if let Some(path) = &args.election_out {
        write_json(path, &election_file)?;
    }
    if let Some(path) = &args.utilities_out {
        write_json(path, &utility_file)?;
    }
    print(&json!({ "election": election_file, "utilities": utility_file }))?;
    Ok(0)
}

/// Parses "1,2;2,3" into 0-based element lists.
fn parse_sets(text: &str, universe: usize) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|x| {
                    let x: usize = x.parse().with_context(|| format!("bad element {x:?}"))?;
                    ensure!((1..=universe).contains(&x), "element {x} outside 1..={universe}");
                    Ok(x - 1)
                })
                .collect()
        })
        .collect()
}

pub fn gen_setcover(args: &GenSetcoverArgs) -> Result<u8> {
    let sets = parse_sets(&args.sets, args.universe)?;
    let sc = SetCoverInstance { universe_size: args.universe, sets, h: args.budget };
    let tie = reduce_setcover_to_tie(&sc)?;
    let p = tie.perspective()?;
    let m0 = tie.profile.num_candidates();
    let names: Vec<String> = (0..m0).map(|j| if j < sc.sets.len() { format!("S{}", j + 1) } else { "none".into() }).collect();
    let egal = EvalVariant::Egalitarian;
    let value = tie_break(&p, &TieRule::Optimistic(egal))?.value;

    let rule = rule_for(args.tie, Some(egal), LexOrder::identity(m0))?;
    let inst = reduce_tie_to_cm(&p, args.ell, &rule)?;
    let mut cm_names: Vec<String> = inst.election.names().to_vec();
    cm_names[..m0].clone_from_slice(&names);
    let ballots = inst.election.ballots().to_vec();
    let renamed = Election::new(cm_names.clone(), ballots)?;
    let lex_order = match &inst.rule {
        TieRule::Lexicographic(order) => Some(order.rank().iter().map(|c| cm_names[c.0].clone()).collect::<Vec<_>>()),
        _ => None,
    };
    let list = |ids: &[CandidateId]| ids.iter().map(|c| names[c.0].clone()).collect::<Vec<_>>();
    print(&json!({
        "perspective": {
            "candidates": names,
            "confirmed": list(&tie.confirmed),
            "pending": list(&tie.pending),
            "k": tie.k,
            "q": 1,
            "utilities": UtilityFile::from_profile(&tie.profile, &names),
            "opt_egal_value": value,
        },
        "reduction": {
            "election": ElectionFile::from_election(&renamed),
            "utilities": UtilityFile::from_profile(&inst.profile, &cm_names),
            "ell": inst.ell,
            "k": inst.k,
            "eval": egal.short_name(),
            "tie": tie_name(&inst.rule),
            "lex_order": lex_order,
            "threshold": 1,
        },
    }))?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sets() {
        assert_eq!(parse_sets("1;2;1,2", 2).unwrap(), vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(parse_sets("1,;", 2).unwrap(), vec![vec![0], vec![]]);
        assert!(parse_sets("3", 2).is_err());
        assert!(parse_sets("a", 2).is_err());
    }
}
