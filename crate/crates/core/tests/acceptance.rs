//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
//! if any criterion fails. Run with `cargo test -p gzasp-core --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gzasp_core::{
    check_size_bounds, classify_aggregate, f_reduct, g_reduct, gsm_asp_m, is_aggregate_stratified,
    parse, parse_bytes, parse_with, render, rewrite_c, rewrite_m, rewrite_n, rewrite_rew,
    rewrite_rew_with, rewrite_str, rewrite_str_with, AggregateClass, AggregateFunction,
    AggregateSpec, Atom, Comparator, Interpretation, Method, ModelSet, NameMode, Program, Reasoner,
    RewriteOptions, Rule, Semantics,
};
use rand::Rng;

use common::*;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(
        failures: &[String],
        elapsed: Duration,
        limit: Option<Duration>,
        summary: String,
    ) -> Self {
        let mut problems = failures.to_vec();
        if let Some(limit) = limit {
            if elapsed > limit {
                problems.push(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        let mut detail = format!("{summary} in {elapsed:.2?}");
        if !problems.is_empty() {
            let shown: Vec<&str> = problems.iter().take(5).map(String::as_str).collect();
            detail.push_str(&format!(
                "; {} problem(s): {}",
                problems.len(),
                shown.join(" | ")
            ));
        }
        Outcome {
            ok: problems.is_empty(),
            detail,
        }
    }
}

fn a(name: &str) -> Atom {
    Atom::new(name).unwrap()
}

fn generated(names: &[&str]) -> Interpretation {
    names.iter().map(|n| Atom::generated(n).unwrap()).collect()
}

fn pi1() -> Program {
    parse("a :- not not a.\nb | c :- count{a, b} >= 1.\n").unwrap()
}

/// The `|S| = |S'|` and equal projections notion of equivalence in a context.
fn equivalent(left: &ModelSet, right: &ModelSet, context: &BTreeSet<Atom>) -> bool {
    left.len() == right.len() && left.project(context) == right.project(context)
}

fn c1_golden() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let reasoner = Reasoner::default();
    let p = pi1();
    let x = ["a__t", "b__t", "c__t"];
    let with_x = |extra: &[&str]| -> Interpretation {
        let mut names: Vec<&str> = x.to_vec();
        names.extend_from_slice(extra);
        generated(&names)
    };
    let checks: [(&str, ModelSet, ModelSet); 4] = [
        (
            "GSM",
            reasoner.stable_models(&p, Semantics::G).unwrap(),
            [generated(&[]), generated(&["a", "c"])]
                .into_iter()
                .collect(),
        ),
        (
            "FSM",
            reasoner.stable_models(&p, Semantics::F).unwrap(),
            [
                generated(&[]),
                generated(&["a", "b"]),
                generated(&["a", "c"]),
            ]
            .into_iter()
            .collect(),
        ),
        (
            "FSM(rew)",
            reasoner
                .stable_models(&rewrite_rew(&p).unwrap(), Semantics::F)
                .unwrap(),
            [with_x(&[]), with_x(&["a", "c"])].into_iter().collect(),
        ),
        (
            "FSM(str)",
            reasoner
                .stable_models(&rewrite_str(&p).unwrap(), Semantics::F)
                .unwrap(),
            [with_x(&[]), with_x(&["a", "c", "a__g", "c__g"])]
                .into_iter()
                .collect(),
        ),
    ];
    for (name, got, want) in checks {
        if got != want {
            fails.push(format!("{name}: got {got:?}, want {want:?}"));
        }
    }
    let ab = generated(&["a", "b"]);
    let ac = generated(&["a", "c"]);
    let reducts = [
        (
            "F(P,{a,b})",
            render(&f_reduct(&p, &ab)),
            "a.\nb | c :- count{a, b} >= 1.\n",
        ),
        (
            "G(P,{a,c})",
            render(&g_reduct(&p, &ac)),
            "a.\nb | c :- a.\n",
        ),
        (
            "G(P,{a,b})",
            render(&g_reduct(&p, &ab)),
            "a.\nb | c :- a, b.\n",
        ),
    ];
    for (name, got, want) in reducts {
        if got != want {
            fails.push(format!("{name}: rendered {got:?}, want {want:?}"));
        }
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        Some(Duration::from_secs(1)),
        "4 model sets and 3 reducts".into(),
    )
}

fn c2_faithfulness(corpus: &[Program]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let reasoner = Reasoner::new(64);
    let (mut models_total, mut differing) = (0, 0);
    for (k, p) in corpus.iter().enumerate() {
        let context = p.atoms();
        let gsm = reasoner.stable_models(p, Semantics::G).unwrap();
        let naive: ModelSet = naive_stable_models(p, true).into_iter().collect();
        if gsm != naive {
            fails.push(format!(
                "#{k}: GSM {gsm:?} differs from exhaustive {naive:?}"
            ));
        }
        models_total += gsm.len();
        differing += usize::from(gsm != reasoner.stable_models(p, Semantics::F).unwrap());
        for method in [Method::Rew, Method::Str] {
            let models = reasoner
                .rewritten_models(p, method, RewriteOptions::default())
                .unwrap();
            if !equivalent(&gsm, &models, &context) {
                fails.push(format!(
                    "#{k} {method}: GSM {gsm:?} vs FSM {models:?} for {:?}",
                    render(p)
                ));
            }
        }
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        Some(Duration::from_secs(120)),
        format!(
            "{} programs, {models_total} G-stable models, {differing} with GSM != FSM",
            corpus.len()
        ),
    )
}

fn c3_negation(corpus: &[Program]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let reasoner = Reasoner::new(64);
    for (k, p) in corpus.iter().enumerate() {
        let context = p.atoms();
        let gsm = reasoner.stable_models(p, Semantics::G).unwrap();
        let rewritings: [(&str, Program); 3] = [
            ("C", rewrite_c(p).unwrap()),
            ("N", rewrite_n(p).unwrap()),
            ("M", rewrite_m(p).unwrap()),
        ];
        for (name, q) in rewritings {
            let models = reasoner.stable_models(&q, Semantics::G).unwrap();
            if !equivalent(&gsm, &models, &context) {
                fails.push(format!(
                    "#{k} {name}: {gsm:?} vs {models:?} for {:?}",
                    render(p)
                ));
            }
        }
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        Some(Duration::from_secs(60)),
        format!("{} programs, rewritings C/N/M", corpus.len()),
    )
}

fn c4_fixpoint(corpus: &[Program]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let reasoner = Reasoner::new(64);
    let mut incoherent = 0;
    for (k, p) in corpus.iter().enumerate() {
        let fast = gsm_asp_m(p).unwrap();
        let slow = reasoner.stable_models(p, Semantics::G).unwrap();
        let naive: ModelSet = naive_stable_models(p, true).into_iter().collect();
        incoherent += usize::from(naive.is_empty());
        if fast != slow || slow != naive {
            fails.push(format!(
                "#{k}: fixpoint {fast:?}, search {slow:?}, exhaustive {naive:?} for {:?}",
                render(p)
            ));
        }
    }
    if incoherent == 0 {
        fails.push("no incoherent program was generated".into());
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        Some(Duration::from_secs(60)),
        format!("{} programs ({incoherent} incoherent)", corpus.len()),
    )
}

fn c5_sizes(all: &[&Program]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    for p in all {
        let report = check_size_bounds(p).unwrap();
        // Recomputed here rather than trusting the report's own flags.
        let atoms = p.atoms().len();
        let size = p.size();
        if report.size_rew > 4 * atoms + 2 * size || report.size_str > 10 * atoms + 2 * size {
            fails.push(format!("{report:?} for {:?}", render(p)));
        }
        if report.size_rew != rewrite_rew(p).unwrap().size() {
            fails.push(format!("inconsistent report {report:?}"));
        }
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        None,
        format!("{} programs", all.len()),
    )
}

/// `a → ga`, `b → gb`, ... so the two halves of a pair share no atom.
fn shifted(p: &Program) -> Program {
    p.rules
        .iter()
        .map(|r| {
            let rename = |x: &Atom| a(&format!("g{}", x.name()));
            let body = r.body.iter().map(|l| match l {
                gzasp_core::Literal::Atom {
                    atom,
                    negation_depth,
                } => gzasp_core::Literal::negated(rename(atom), *negation_depth),
                gzasp_core::Literal::Aggregate(spec) => {
                    gzasp_core::Literal::Aggregate(spec.map_atoms(rename))
                }
            });
            Rule::new(r.head.iter().map(rename), body)
        })
        .collect()
}

fn rule_set(p: &Program) -> BTreeSet<Rule> {
    p.rules.iter().cloned().collect()
}

fn c6_modularity(corpus: &[Program]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut rng = rng(0x6a5f_0006);
    for k in 0..100 {
        let left = random_program(&mut rng, &GenConfig::mixed());
        let right = shifted(&random_program(&mut rng, &GenConfig::mixed()));
        let both = left.union(&right);
        for minimal_copies in [false, true] {
            let options = RewriteOptions { minimal_copies };
            for name in ["rew", "str"] {
                let tr = |p: &Program| {
                    let out = match name {
                        "rew" => rewrite_rew_with(p, options),
                        _ => rewrite_str_with(p, options),
                    };
                    rule_set(&out.unwrap())
                };
                let whole = tr(&both);
                let mut parts = tr(&left);
                parts.extend(tr(&right));
                if whole != parts {
                    fails.push(format!(
                        "pair #{k} {name} (minimal copies: {minimal_copies})"
                    ));
                }
            }
        }
    }
    // Search space: every model found in the faithfulness suite contains all
    // true copies; small rewritings are also checked over all their models.
    let reasoner = Reasoner::new(64);
    let mut checked = 0usize;
    for (k, p) in corpus.iter().enumerate() {
        let copies: BTreeSet<Atom> = p.atoms().iter().map(Atom::true_copy).collect();
        for method in [Method::Rew, Method::Str] {
            let models = reasoner
                .rewritten_models(p, method, RewriteOptions::default())
                .unwrap();
            for m in &models {
                checked += 1;
                if !copies.is_subset(m.atoms()) {
                    fails.push(format!("#{k} {method}: stable model {m} lacks a true copy"));
                }
            }
        }
        let rew = rewrite_rew(p).unwrap();
        if rew.atoms().len() <= 12 {
            for m in naive_models(&rew) {
                checked += 1;
                if !copies.is_subset(&m) {
                    fails.push(format!("#{k} rew: model {m:?} lacks a true copy"));
                }
            }
        }
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        None,
        format!("100 pairs x 2 rewritings x 2 option sets; {checked} models searched"),
    )
}

fn c7_stratification(all: &[&Program]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut disjunction_free = 0;
    for p in all {
        let rew = rewrite_rew(p).unwrap();
        let str_ = rewrite_str(p).unwrap();
        if !is_aggregate_stratified(&str_) {
            fails.push(format!("str not stratified for {:?}", render(p)));
        }
        if !p.has_disjunction() {
            disjunction_free += 1;
            if rew.has_disjunction() || str_.has_disjunction() {
                fails.push(format!("disjunction introduced for {:?}", render(p)));
            }
        }
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        None,
        format!(
            "{} programs ({disjunction_free} disjunction-free)",
            all.len()
        ),
    )
}

fn c8_containment(corpus: &[Program]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let reasoner = Reasoner::new(64);
    let (mut df, mut af) = (0, 0);
    for (k, p) in corpus.iter().enumerate() {
        let g = reasoner.stable_models(p, Semantics::G).unwrap();
        let f = reasoner.stable_models(p, Semantics::F).unwrap();
        let naive_f: ModelSet = naive_stable_models(p, false).into_iter().collect();
        if f != naive_f {
            fails.push(format!(
                "#{k}: FSM {f:?} differs from exhaustive {naive_f:?}"
            ));
        }
        if !p.has_disjunction() {
            df += 1;
            if !g.is_subset(&f) {
                fails.push(format!("#{k}: GSM {g:?} not within FSM {f:?}"));
            }
        }
        if !p.has_aggregates() {
            af += 1;
            if g != f {
                fails.push(format!("#{k}: aggregate-free but GSM {g:?} != FSM {f:?}"));
            }
        }
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        None,
        format!("{df} disjunction-free, {af} aggregate-free programs"),
    )
}

fn class_of(monotone: bool, convex: bool) -> AggregateClass {
    match (monotone, convex) {
        (true, _) => AggregateClass::Monotone,
        (false, true) => AggregateClass::Convex,
        (false, false) => AggregateClass::NonConvex,
    }
}

/// Expected class from the shape of the aggregate, where one is known.
fn analytic(spec: &AggregateSpec) -> Option<AggregateClass> {
    let n = spec.domain_len();
    let weights: Vec<i64> = spec.elements().iter().map(|e| e.weight).collect();
    match spec.func() {
        AggregateFunction::Odd => Some(match n {
            1 => AggregateClass::Monotone,
            2 => AggregateClass::Convex,
            _ => AggregateClass::NonConvex,
        }),
        AggregateFunction::Even => Some(match n {
            1 => AggregateClass::Convex,
            _ => AggregateClass::NonConvex,
        }),
        AggregateFunction::Sum => match spec.guard().unwrap().0 {
            Comparator::Ge | Comparator::Gt if weights.iter().all(|&w| w >= 0) => {
                Some(AggregateClass::Monotone)
            }
            Comparator::Le | Comparator::Lt if weights.iter().all(|&w| w <= 0) => {
                Some(AggregateClass::Monotone)
            }
            _ => None,
        },
        _ => None,
    }
}

fn c9_classification() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let names = ["a", "b", "c", "d"];
    let domain = |n: usize| names[..n].iter().map(|x| a(x)).collect::<Vec<_>>();
    for k in [1, 2] {
        for n in [2, 3] {
            for (cmp, want) in [
                (Comparator::Ge, AggregateClass::Monotone),
                (Comparator::Eq, AggregateClass::Convex),
                (Comparator::Ne, AggregateClass::NonConvex),
            ] {
                let spec = AggregateSpec::count(domain(n), cmp, k).unwrap();
                let got = classify_aggregate(&spec).unwrap();
                if got != want {
                    let (m, c) = lattice_oracle(&spec);
                    fails.push(format!(
                        "count/{n} {} {k}: got {got}, want {want} (lattice oracle: {})",
                        cmp.symbol(),
                        class_of(m, c)
                    ));
                }
            }
        }
    }
    let mut specs = Vec::new();
    for n in 1..=4 {
        specs.push(
            AggregateSpec::new(
                AggregateFunction::Odd,
                domain(n).into_iter().map(|x| (1, x)),
                None,
            )
            .unwrap(),
        );
        specs.push(
            AggregateSpec::new(
                AggregateFunction::Even,
                domain(n).into_iter().map(|x| (1, x)),
                None,
            )
            .unwrap(),
        );
    }
    for n in 0..=4 {
        for code in 0..5usize.pow(n as u32) {
            let weights: Vec<i64> = (0..n)
                .map(|i| (code / 5usize.pow(i as u32) % 5) as i64 - 2)
                .collect();
            for cmp in Comparator::ALL {
                for bound in -3..=3 {
                    let elems = weights.iter().copied().zip(domain(n));
                    specs.push(
                        AggregateSpec::new(AggregateFunction::Sum, elems, Some((cmp, bound)))
                            .unwrap(),
                    );
                }
            }
        }
    }
    let mut analytic_hits = 0;
    for spec in &specs {
        let got = classify_aggregate(spec).unwrap();
        let (m, c) = lattice_oracle(spec);
        let oracle = class_of(m, c);
        if got != oracle {
            fails.push(format!(
                "{spec:?}: classifier {got}, lattice oracle {oracle}"
            ));
        }
        if let Some(want) = analytic(spec) {
            analytic_hits += 1;
            if got != want {
                fails.push(format!("{spec:?}: classifier {got}, analytic {want}"));
            }
        }
    }
    Outcome::new(
        &fails,
        start.elapsed(),
        None,
        format!(
            "12 count cases, {} sum/odd/even specs ({analytic_hits} with analytic class)",
            specs.len()
        ),
    )
}

fn c10_parser(all: &[&Program]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut round_trips = 0;
    for p in all {
        let text = render(p);
        match parse(&text) {
            Ok(q) if q == **p => {}
            other => fails.push(format!("{text:?} re-parsed as {other:?}")),
        }
        for q in [rewrite_rew(p).unwrap(), rewrite_str(p).unwrap()] {
            let text = render(&q);
            if parse_with(&text, NameMode::Generated).as_ref() != Ok(&q) {
                fails.push(format!("rewritten program {text:?} does not round-trip"));
            }
        }
        round_trips += 3;
    }
    let alphabet = b"abcz_09 |:-.,{}<>=!~#%\n\tnotcountsumavgminmaxoddeven12";
    let mut rng = rng(0x6a5f_000a);
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let (mut accepted, mut rejected) = (0, 0);
    for k in 0..10_000 {
        let len = rng.gen_range(0..=256);
        let bytes: Vec<u8> = (0..len)
            .map(|_| {
                if k % 2 == 0 {
                    rng.gen()
                } else {
                    alphabet[rng.gen_range(0..alphabet.len())]
                }
            })
            .collect();
        for mode in [NameMode::User, NameMode::Generated] {
            match std::panic::catch_unwind(|| parse_bytes(&bytes, mode)) {
                Ok(Ok(_)) => accepted += 1,
                Ok(Err(_)) => rejected += 1,
                Err(_) => fails.push(format!("panic on {bytes:?}")),
            }
        }
    }
    std::panic::set_hook(default_hook);
    Outcome::new(
        &fails,
        start.elapsed(),
        None,
        format!(
            "{round_trips} round trips; 10000 byte strings ({accepted} parsed, {rejected} rejected)"
        ),
    )
}

fn main() -> ExitCode {
    let faithfulness = faithfulness_corpus();
    let negation = negation_corpus();
    let asp_m = asp_m_corpus();
    let all: Vec<&Program> = faithfulness.iter().chain(&negation).chain(&asp_m).collect();

    let results = [
        (1, "golden example", c1_golden()),
        (2, "rewriting faithfulness", c2_faithfulness(&faithfulness)),
        (3, "negation eliminations", c3_negation(&negation)),
        (4, "fixpoint oracle", c4_fixpoint(&asp_m)),
        (5, "size bounds", c5_sizes(&all)),
        (
            6,
            "modularity and search space",
            c6_modularity(&faithfulness),
        ),
        (7, "stratification", c7_stratification(&all)),
        (8, "containment", c8_containment(&faithfulness)),
        (9, "classification", c9_classification()),
        (10, "parser robustness", c10_parser(&all)),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        let verdict = if outcome.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!outcome.ok);
        println!("criterion {n:>2} {verdict} {name}: {}", outcome.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
