//! Source-to-source transformations.
//!
//! * `C`, `N`, `M` remove default negation from programs without aggregates,
//!   using convex, non-convex and monotone aggregates respectively.
//! * `rew` and `str` compile G-stable semantics into F-stable semantics;
//!   `str` additionally leaves every aggregate stratified.
//!
//! Generated atoms are derived from base names (`p__t`, `p__g`, `p__f`,
//! `__bot`), never from a counter, so rewriting distributes over unions of
//! programs with disjoint atoms. Output order is: transformed input rules in
//! input order, then the generated rules grouped per atom in canonical order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;
use thiserror::Error;

use crate::ast::{AggregateSpec, Atom, Comparator, Literal, Program, Rule};
use crate::parser::render_rule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule {rule} `{text}`: {reason}")]
    Precondition {
        rule: usize,
        text: String,
        reason: String,
    },
    #[error("generated atom `{0}` already occurs in the program")]
    NameCollision(Atom),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RewriteOptions {
    /// Generate copies only for atoms in some aggregate domain (`rew`/`str`).
    pub minimal_copies: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    C,
    N,
    M,
    Rew,
    Str,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c" => Ok(Method::C),
            "n" => Ok(Method::N),
            "m" => Ok(Method::M),
            "rew" => Ok(Method::Rew),
            "str" => Ok(Method::Str),
            other => Err(format!("unknown rewriting method `{other}`")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::C => "c",
            Method::N => "n",
            Method::M => "m",
            Method::Rew => "rew",
            Method::Str => "str",
        })
    }
}

pub fn rewrite(
    program: &Program,
    method: Method,
    options: RewriteOptions,
) -> Result<Program, RewriteError> {
    match method {
        Method::C => rewrite_c(program),
        Method::N => rewrite_n(program),
        Method::M => rewrite_m(program),
        Method::Rew => rewrite_rew_with(program, options),
        Method::Str => rewrite_str_with(program, options),
    }
}

/// Roles of generated atoms. Each role is a bijection between base atoms and
/// the names it produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopyRole {
    /// `p′`, written `p__t`.
    True,
    /// `p″`, written `p__g`.
    Guess,
    /// `p^F`, written `p__f`.
    False,
}

impl CopyRole {
    const ALL: [CopyRole; 3] = [CopyRole::True, CopyRole::Guess, CopyRole::False];

    fn suffix(self) -> &'static str {
        match self {
            CopyRole::True => "__t",
            CopyRole::Guess => "__g",
            CopyRole::False => "__f",
        }
    }

    pub fn apply(self, atom: &Atom) -> Atom {
        match self {
            CopyRole::True => atom.true_copy(),
            CopyRole::Guess => atom.guess_copy(),
            CopyRole::False => atom.false_copy(),
        }
    }

    /// Inverse of [`CopyRole::apply`].
    pub fn base(self, atom: &Atom) -> Option<Atom> {
        let base = atom.name().strip_suffix(self.suffix())?;
        Atom::new(base).or_else(|_| Atom::generated(base)).ok()
    }

    /// The role and base atom of a generated copy, if `atom` is one.
    pub fn classify(atom: &Atom) -> Option<(CopyRole, Atom)> {
        Self::ALL
            .into_iter()
            .find_map(|role| role.base(atom).map(|b| (role, b)))
    }
}

fn ensure_fresh(
    program: &Program,
    generated: impl IntoIterator<Item = Atom>,
) -> Result<(), RewriteError> {
    let atoms = program.atoms();
    match generated.into_iter().find(|a| atoms.contains(a)) {
        Some(a) => Err(RewriteError::NameCollision(a)),
        None => Ok(()),
    }
}

/// Precondition of `C`, `N`, `M`: aggregate-free, negation depth at most 1.
fn check_normal(program: &Program) -> Result<(), RewriteError> {
    for (i, rule) in program.rules.iter().enumerate() {
        let reason = rule.body.iter().find_map(|l| match l {
            Literal::Aggregate(_) => Some("aggregates are not allowed".to_string()),
            Literal::Atom {
                atom,
                negation_depth,
            } if *negation_depth > 1 => Some(format!(
                "`{atom}` is under {negation_depth} negations; at most 1 is allowed"
            )),
            Literal::Atom { .. } => None,
        });
        if let Some(reason) = reason {
            return Err(RewriteError::Precondition {
                rule: i + 1,
                text: render_rule(rule),
                reason,
            });
        }
    }
    Ok(())
}

fn replace_negative(program: &Program, mut replace: impl FnMut(&Atom) -> Literal) -> Vec<Rule> {
    program
        .rules
        .iter()
        .map(|r| Rule {
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .map(|l| match l {
                    Literal::Atom { atom, .. } if l.is_negative() => replace(atom),
                    _ => l.clone(),
                })
                .collect(),
        })
        .collect()
}

/// `C(Π)`: every `not p` becomes `count{p} <= 0`.
pub fn rewrite_c(program: &Program) -> Result<Program, RewriteError> {
    check_normal(program)?;
    Ok(Program::new(replace_negative(program, |p| {
        AggregateSpec::count([p.clone()], Comparator::Le, 0)
            .expect("singleton count")
            .into()
    })))
}

/// `N(Π)`: every `not p` becomes `count{p, __bot} != 1`.
pub fn rewrite_n(program: &Program) -> Result<Program, RewriteError> {
    check_normal(program)?;
    ensure_fresh(program, [Atom::bottom()])?;
    Ok(Program::new(replace_negative(program, |p| {
        AggregateSpec::count([p.clone(), Atom::bottom()], Comparator::Ne, 1)
            .expect("two distinct atoms")
            .into()
    })))
}

/// `M(Π)`: every `not p` becomes `p__f`, and `p | p__f :- count{p} >= 0.` is
/// added for every atom `p`.
pub fn rewrite_m(program: &Program) -> Result<Program, RewriteError> {
    check_normal(program)?;
    let atoms = program.atoms();
    ensure_fresh(program, atoms.iter().map(Atom::false_copy))?;
    let mut rules = replace_negative(program, |p| Literal::positive(p.false_copy()));
    for p in &atoms {
        let always = AggregateSpec::count([p.clone()], Comparator::Ge, 0).expect("singleton count");
        rules.push(Rule::new([p.clone(), p.false_copy()], [always.into()]));
    }
    Ok(Program::new(rules))
}

fn copy_atoms(program: &Program, options: RewriteOptions) -> BTreeSet<Atom> {
    if options.minimal_copies {
        program
            .aggregates()
            .flat_map(AggregateSpec::domain)
            .cloned()
            .collect()
    } else {
        program.atoms()
    }
}

/// Appends `p__t` for each aggregate-domain atom of the rule (once per atom),
/// optionally renaming aggregate elements to their guess copies.
fn guard_aggregates(rule: &Rule, rename_to_guess: bool) -> Rule {
    let mut body: Vec<Literal> = Vec::with_capacity(rule.body.len());
    let mut appended: Vec<Literal> = Vec::new();
    let mut seen = BTreeSet::new();
    for literal in &rule.body {
        match literal {
            Literal::Aggregate(spec) => {
                for p in spec.domain() {
                    if seen.insert(p.clone()) {
                        appended.push(Literal::positive(p.true_copy()));
                    }
                }
                body.push(if rename_to_guess {
                    Literal::Aggregate(spec.map_atoms(Atom::guess_copy))
                } else {
                    literal.clone()
                });
            }
            Literal::Atom { .. } => body.push(literal.clone()),
        }
    }
    body.extend(appended);
    Rule {
        head: rule.head.clone(),
        body,
    }
}

fn true_copy_rules(p: &Atom) -> [Rule; 2] {
    [
        Rule::new([p.true_copy()], [Literal::negative(p.clone())]),
        Rule::new([p.true_copy()], [Literal::positive(p.clone())]),
    ]
}

/// `rew(Π)` with copies for every atom.
pub fn rewrite_rew(program: &Program) -> Result<Program, RewriteError> {
    rewrite_rew_with(program, RewriteOptions::default())
}

pub fn rewrite_rew_with(
    program: &Program,
    options: RewriteOptions,
) -> Result<Program, RewriteError> {
    let copies = copy_atoms(program, options);
    ensure_fresh(program, copies.iter().map(Atom::true_copy))?;
    let mut rules: Vec<Rule> = program
        .rules
        .iter()
        .map(|r| guard_aggregates(r, false))
        .collect();
    for p in &copies {
        rules.extend(true_copy_rules(p));
    }
    Ok(Program::new(rules))
}

/// `str(Π)` with copies for every atom.
pub fn rewrite_str(program: &Program) -> Result<Program, RewriteError> {
    rewrite_str_with(program, RewriteOptions::default())
}

pub fn rewrite_str_with(
    program: &Program,
    options: RewriteOptions,
) -> Result<Program, RewriteError> {
    let copies = copy_atoms(program, options);
    ensure_fresh(
        program,
        copies.iter().flat_map(|p| [p.true_copy(), p.guess_copy()]),
    )?;
    let mut rules: Vec<Rule> = program
        .rules
        .iter()
        .map(|r| guard_aggregates(r, true))
        .collect();
    for p in &copies {
        let g = p.guess_copy();
        rules.extend(true_copy_rules(p));
        rules.push(Rule::new([g.clone()], [Literal::negated(g.clone(), 2)]));
        rules.push(Rule::constraint([
            Literal::negative(g.clone()),
            Literal::positive(p.clone()),
        ]));
        rules.push(Rule::constraint([
            Literal::positive(g),
            Literal::negative(p.clone()),
        ]));
    }
    Ok(Program::new(rules))
}

/// Arc `q → p` whenever `p` is in the head of a rule whose body mentions `q`,
/// as a possibly negated literal or inside an aggregate domain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    nodes: BTreeSet<Atom>,
    arcs: BTreeSet<(Atom, Atom)>,
}

impl DependencyGraph {
    pub fn nodes(&self) -> &BTreeSet<Atom> {
        &self.nodes
    }

    pub fn arcs(&self) -> &BTreeSet<(Atom, Atom)> {
        &self.arcs
    }

    pub fn has_arc(&self, from: &Atom, to: &Atom) -> bool {
        self.arcs.contains(&(from.clone(), to.clone()))
    }

    /// Strongly connected component index of every node.
    pub fn components(&self) -> BTreeMap<Atom, usize> {
        let index: BTreeMap<&Atom, usize> = self.nodes.iter().zip(0..).collect();
        let mut graph = DiGraphMap::<usize, ()>::new();
        for i in index.values() {
            graph.add_node(*i);
        }
        for (from, to) in &self.arcs {
            graph.add_edge(index[from], index[to], ());
        }
        let names: Vec<&Atom> = self.nodes.iter().collect();
        tarjan_scc(&graph)
            .into_iter()
            .enumerate()
            .flat_map(|(c, members)| {
                let names = &names;
                members.into_iter().map(move |i| (names[i].clone(), c))
            })
            .collect()
    }
}

pub fn dependency_graph(program: &Program) -> DependencyGraph {
    let mut graph = DependencyGraph {
        nodes: program.atoms(),
        arcs: BTreeSet::new(),
    };
    for rule in &program.rules {
        for q in rule.body.iter().flat_map(Literal::atoms) {
            for p in &rule.head {
                graph.arcs.insert((q.clone(), p.clone()));
            }
        }
    }
    graph
}

/// No rule has a head atom and an aggregate-domain atom of its body in the
/// same strongly connected component.
pub fn is_aggregate_stratified(program: &Program) -> bool {
    let components = dependency_graph(program).components();
    program.rules.iter().all(|rule| {
        rule.aggregates()
            .flat_map(AggregateSpec::domain)
            .all(|q| rule.head.iter().all(|p| components[p] != components[q]))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeReport {
    pub size_in: usize,
    pub size_rew: usize,
    pub size_str: usize,
    pub atoms: usize,
    pub rew_ok: bool,
    pub str_ok: bool,
}

impl SizeReport {
    pub fn rew_bound(&self) -> usize {
        4 * self.atoms + 2 * self.size_in
    }

    pub fn str_bound(&self) -> usize {
        10 * self.atoms + 2 * self.size_in
    }
}

/// Sizes of `rew(Π)` and `str(Π)` against `4|At|+2‖Π‖` and `10|At|+2‖Π‖`.
pub fn check_size_bounds(program: &Program) -> Result<SizeReport, RewriteError> {
    let size_rew = rewrite_rew(program)?.size();
    let size_str = rewrite_str(program)?.size();
    let mut report = SizeReport {
        size_in: program.size(),
        size_rew,
        size_str,
        atoms: program.atoms().len(),
        rew_ok: false,
        str_ok: false,
    };
    report.rew_ok = report.size_rew <= report.rew_bound();
    report.str_ok = report.size_str <= report.str_bound();
    Ok(report)
}
