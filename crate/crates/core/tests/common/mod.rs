//! Random program generation and a naive reference implementation of both
//! semantics, written directly from the definitions and sharing nothing with
//! the library beyond the syntax tree.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gzasp_core::{
    AggregateFunction, AggregateSpec, Atom, Comparator, Interpretation, Literal, Program, Rule,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
    pub max_domain: usize,
    /// Highest negation depth; 0 disables negation.
    pub max_depth: u32,
    pub disjunction: bool,
    pub constraints: bool,
    pub aggregates: bool,
    /// Restrict aggregates to monotone shapes.
    pub monotone_only: bool,
    /// Probability of appending a `p :- count{p} >= 0.` gadget.
    pub gadget_rate: f64,
}

impl GenConfig {
    /// Mixed negation, disjunction, constraints and every aggregate function.
    pub fn mixed() -> Self {
        GenConfig {
            max_atoms: 6,
            max_rules: 8,
            max_body: 3,
            max_domain: 3,
            max_depth: 3,
            disjunction: true,
            constraints: true,
            aggregates: true,
            monotone_only: false,
            gadget_rate: 0.0,
        }
    }

    /// ASP(~,∨): aggregate-free, negation depth at most 1, non-empty heads.
    pub fn normal_disjunctive() -> Self {
        GenConfig {
            max_depth: 1,
            constraints: false,
            aggregates: false,
            ..Self::mixed()
        }
    }

    /// ASP(M): negation-free, disjunction-free, monotone aggregates.
    pub fn asp_m() -> Self {
        GenConfig {
            max_depth: 0,
            disjunction: false,
            constraints: false,
            monotone_only: true,
            gadget_rate: 0.35,
            ..Self::mixed()
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn atom(name: &str) -> Atom {
    Atom::new(name).unwrap()
}

fn random_aggregate(rng: &mut impl Rng, pool: &[Atom], cfg: &GenConfig) -> AggregateSpec {
    let size = rng.gen_range(0..=cfg.max_domain.min(pool.len()));
    let domain: Vec<Atom> = pool.choose_multiple(rng, size).cloned().collect();
    if cfg.monotone_only {
        let cmp = *[Comparator::Ge, Comparator::Gt].choose(rng).unwrap();
        let bound = rng.gen_range(0..=3);
        let func = match (domain.is_empty(), rng.gen_range(0..3)) {
            (true, _) | (false, 0) => AggregateFunction::Count,
            (false, 1) => AggregateFunction::Sum,
            _ => AggregateFunction::Max,
        };
        let elems = domain
            .into_iter()
            .map(|a| (rng.gen_range(0..=3), a))
            .collect::<Vec<_>>();
        return AggregateSpec::new(func, elems, Some((cmp, bound))).unwrap();
    }
    let allowed: Vec<AggregateFunction> = AggregateFunction::ALL
        .into_iter()
        .filter(|f| !domain.is_empty() || f.allows_empty_domain())
        .collect();
    let func = *allowed.choose(rng).unwrap();
    let guard =
        (!func.is_parity()).then(|| (*Comparator::ALL.choose(rng).unwrap(), rng.gen_range(-1..=3)));
    let elems: Vec<(i64, Atom)> = domain
        .into_iter()
        .map(|a| (rng.gen_range(-2..=3), a))
        .collect();
    AggregateSpec::new(func, elems, guard).unwrap()
}

fn random_literal(rng: &mut impl Rng, pool: &[Atom], cfg: &GenConfig) -> Literal {
    if cfg.aggregates && rng.gen_bool(0.35) {
        return Literal::Aggregate(random_aggregate(rng, pool, cfg));
    }
    let atom = pool.choose(rng).unwrap().clone();
    let depth = if cfg.max_depth == 0 || rng.gen_bool(0.5) {
        0
    } else {
        rng.gen_range(1..=cfg.max_depth)
    };
    Literal::negated(atom, depth)
}

pub fn random_program(rng: &mut impl Rng, cfg: &GenConfig) -> Program {
    let n_atoms = rng.gen_range(1..=cfg.max_atoms.min(NAMES.len()));
    let pool: Vec<Atom> = NAMES[..n_atoms].iter().map(|n| atom(n)).collect();
    let n_rules = rng.gen_range(1..=cfg.max_rules);
    let mut rules = Vec::with_capacity(n_rules);
    for _ in 0..n_rules {
        let head_len = if cfg.constraints && rng.gen_bool(0.12) {
            0
        } else if cfg.disjunction && n_atoms >= 2 && rng.gen_bool(0.3) {
            rng.gen_range(2..=3.min(n_atoms))
        } else {
            1
        };
        let body_len = rng.gen_range(0..=cfg.max_body);
        let body: Vec<Literal> = (0..body_len)
            .map(|_| random_literal(rng, &pool, cfg))
            .collect();
        // Heads taken from an aggregate's own domain give recursion through
        // aggregates, where the two semantics part ways.
        let recursive: Vec<Atom> = body
            .iter()
            .filter_map(|l| match l {
                Literal::Aggregate(spec) => Some(spec.domain().cloned()),
                _ => None,
            })
            .flatten()
            .collect();
        let head: Vec<Atom> = if head_len > 0 && !recursive.is_empty() && rng.gen_bool(0.5) {
            recursive.choose_multiple(rng, head_len).cloned().collect()
        } else {
            pool.choose_multiple(rng, head_len).cloned().collect()
        };
        rules.push(Rule::new(head, body));
    }
    if cfg.gadget_rate > 0.0 && rng.gen_bool(cfg.gadget_rate) {
        let p = pool.choose(rng).unwrap().clone();
        let always = AggregateSpec::count([p.clone()], Comparator::Ge, 0).unwrap();
        rules.push(Rule::new([p], [always.into()]));
    }
    Program::new(rules)
}

/// Programs drawn from a fixed seed; the same seed always yields the same list.
pub fn corpus(seed: u64, count: usize, cfg: &GenConfig) -> Vec<Program> {
    let mut rng = rng(seed);
    (0..count).map(|_| random_program(&mut rng, cfg)).collect()
}

pub const FAITHFULNESS_SEED: u64 = 0x6a5f_0001;
pub const NEGATION_SEED: u64 = 0x6a5f_0002;
pub const ASP_M_SEED: u64 = 0x6a5f_0003;

pub fn faithfulness_corpus() -> Vec<Program> {
    corpus(FAITHFULNESS_SEED, 2000, &GenConfig::mixed())
}

pub fn negation_corpus() -> Vec<Program> {
    corpus(NEGATION_SEED, 320, &GenConfig::normal_disjunctive())
}

pub fn asp_m_corpus() -> Vec<Program> {
    corpus(ASP_M_SEED, 320, &GenConfig::asp_m())
}

// ---------------------------------------------------------------------------
// Naive reference semantics
// ---------------------------------------------------------------------------

pub fn naive_aggregate(spec: &AggregateSpec, i: &BTreeSet<Atom>) -> bool {
    let selected: Vec<i64> = spec
        .elements()
        .iter()
        .filter(|e| i.contains(&e.atom))
        .map(|e| e.weight)
        .collect();
    let n = selected.len() as i128;
    let sum: i128 = selected.iter().map(|&w| w as i128).sum();
    let test = |lhs: i128, rhs: i128| match spec.guard().unwrap().0 {
        Comparator::Lt => lhs < rhs,
        Comparator::Le => lhs <= rhs,
        Comparator::Ge => lhs >= rhs,
        Comparator::Gt => lhs > rhs,
        Comparator::Eq => lhs == rhs,
        Comparator::Ne => lhs != rhs,
    };
    match spec.func() {
        AggregateFunction::Odd => n % 2 == 1,
        AggregateFunction::Even => n % 2 == 0,
        _ => {
            let bound = spec.guard().unwrap().1 as i128;
            match spec.func() {
                AggregateFunction::Count => test(n, bound),
                AggregateFunction::Sum => test(sum, bound),
                AggregateFunction::Avg => n > 0 && test(sum, bound * n),
                AggregateFunction::Min => selected
                    .iter()
                    .min()
                    .is_some_and(|&m| test(m as i128, bound)),
                AggregateFunction::Max => selected
                    .iter()
                    .max()
                    .is_some_and(|&m| test(m as i128, bound)),
                _ => unreachable!(),
            }
        }
    }
}

fn naive_literal(l: &Literal, i: &BTreeSet<Atom>) -> bool {
    match l {
        Literal::Atom {
            atom,
            negation_depth,
        } => {
            let mut v = i.contains(atom);
            for _ in 0..*negation_depth {
                v = !v;
            }
            v
        }
        Literal::Aggregate(spec) => naive_aggregate(spec, i),
    }
}

fn naive_body(r: &Rule, i: &BTreeSet<Atom>) -> bool {
    r.body.iter().all(|l| naive_literal(l, i))
}

pub fn naive_model(p: &Program, i: &BTreeSet<Atom>) -> bool {
    p.rules
        .iter()
        .all(|r| !naive_body(r, i) || r.head.iter().any(|h| i.contains(h)))
}

fn naive_reduct(p: &Program, i: &BTreeSet<Atom>, g: bool) -> Program {
    p.rules
        .iter()
        .filter(|r| naive_body(r, i))
        .map(|r| {
            let mut body = Vec::new();
            for l in &r.body {
                match l {
                    Literal::Atom { negation_depth, .. } if *negation_depth > 0 => {}
                    Literal::Atom { .. } => body.push(l.clone()),
                    Literal::Aggregate(spec) if g => body.extend(
                        spec.domain()
                            .filter(|a| i.contains(*a))
                            .map(|a| Literal::positive(a.clone())),
                    ),
                    Literal::Aggregate(_) => body.push(l.clone()),
                }
            }
            Rule::new(r.head.iter().cloned(), body)
        })
        .collect()
}

/// All subsets of `atoms`.
pub fn subsets(atoms: &[Atom]) -> impl Iterator<Item = BTreeSet<Atom>> + '_ {
    (0u64..1 << atoms.len()).map(move |m| {
        atoms
            .iter()
            .enumerate()
            .filter(|(k, _)| m & (1 << k) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    })
}

/// Stable models by exhaustive enumeration of candidates and of strict
/// subsets for minimality.
pub fn naive_stable_models(p: &Program, g: bool) -> BTreeSet<Interpretation> {
    let atoms: Vec<Atom> = p.atoms().into_iter().collect();
    let mut out = BTreeSet::new();
    for i in subsets(&atoms) {
        if !naive_model(p, &i) {
            continue;
        }
        let reduct = naive_reduct(p, &i, g);
        let members: Vec<Atom> = i.iter().cloned().collect();
        let smaller = subsets(&members).any(|j| j.len() < i.len() && naive_model(&reduct, &j));
        if !smaller {
            out.insert(i.into_iter().collect());
        }
    }
    out
}

/// All classical models over `At(Π)`.
pub fn naive_models(p: &Program) -> Vec<BTreeSet<Atom>> {
    let atoms: Vec<Atom> = p.atoms().into_iter().collect();
    subsets(&atoms).filter(|i| naive_model(p, i)).collect()
}

/// Three-set convexity and upward closure straight from the definitions,
/// over the subsets of the aggregate's domain.
pub fn lattice_oracle(spec: &AggregateSpec) -> (bool, bool) {
    let dom: Vec<Atom> = spec.domain().cloned().collect();
    let sets: Vec<BTreeSet<Atom>> = subsets(&dom).collect();
    let truth: Vec<bool> = sets.iter().map(|s| naive_aggregate(spec, s)).collect();
    let mut monotone = true;
    let mut convex = true;
    for (i, si) in sets.iter().enumerate() {
        for (j, sj) in sets.iter().enumerate() {
            if !si.is_subset(sj) {
                continue;
            }
            if truth[i] && !truth[j] {
                monotone = false;
            }
            for (k, sk) in sets.iter().enumerate() {
                if sj.is_subset(sk) && truth[i] && truth[k] && !truth[j] {
                    convex = false;
                }
            }
        }
    }
    (monotone, convex)
}
