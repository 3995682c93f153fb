//! Satisfaction, the F- and G-reducts, the immediate consequence operator,
//! minimal-model checking and aggregate classification.

use std::fmt;

use thiserror::Error;

use crate::ast::{AggregateSpec, Interpretation, Literal, Program, Rule};
use crate::compiled::{self, CompiledProgram, Universe};

/// Largest aggregate domain the exhaustive classifier accepts.
pub const MAX_CLASSIFY_DOMAIN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("program is not in ASP(M): {0}")]
    NotAspM(String),
    #[error("aggregate domain of size {size} exceeds the classification limit {limit}")]
    DomainTooLarge { size: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggregateClass {
    Monotone,
    Convex,
    NonConvex,
}

impl fmt::Display for AggregateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregateClass::Monotone => "MONOTONE",
            AggregateClass::Convex => "CONVEX",
            AggregateClass::NonConvex => "NONCONVEX",
        })
    }
}

/// `I ⊨ A`, i.e. `A(I ∩ dom(A))`.
pub fn eval_aggregate(spec: &AggregateSpec, interp: &Interpretation) -> bool {
    compiled::evaluate(
        spec.func(),
        spec.guard(),
        spec.elements()
            .iter()
            .filter(|e| interp.contains(&e.atom))
            .map(|e| e.weight),
    )
}

/// Anything `I ⊨ x` is defined for.
pub trait Satisfiable {
    fn satisfied_by(&self, interp: &Interpretation) -> bool;
}

impl Satisfiable for AggregateSpec {
    fn satisfied_by(&self, interp: &Interpretation) -> bool {
        eval_aggregate(self, interp)
    }
}

impl Satisfiable for Literal {
    /// `not^d p` holds iff `(p ∈ I) xor (d odd)`.
    fn satisfied_by(&self, interp: &Interpretation) -> bool {
        match self {
            Literal::Atom {
                atom,
                negation_depth,
            } => interp.contains(atom) ^ (negation_depth % 2 == 1),
            Literal::Aggregate(spec) => eval_aggregate(spec, interp),
        }
    }
}

impl Satisfiable for [Literal] {
    fn satisfied_by(&self, interp: &Interpretation) -> bool {
        self.iter().all(|l| l.satisfied_by(interp))
    }
}

impl Satisfiable for Rule {
    fn satisfied_by(&self, interp: &Interpretation) -> bool {
        !self.body.satisfied_by(interp) || self.head.iter().any(|a| interp.contains(a))
    }
}

impl Satisfiable for Program {
    fn satisfied_by(&self, interp: &Interpretation) -> bool {
        self.rules.iter().all(|r| r.satisfied_by(interp))
    }
}

pub fn satisfies<T: Satisfiable + ?Sized>(interp: &Interpretation, x: &T) -> bool {
    x.satisfied_by(interp)
}

/// `F(Π, I)`: rules with true bodies, negative literals removed.
pub fn f_reduct(program: &Program, interp: &Interpretation) -> Program {
    program
        .rules
        .iter()
        .filter(|r| r.body.satisfied_by(interp))
        .map(|r| Rule {
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .filter(|l| !l.is_negative())
                .cloned()
                .collect(),
        })
        .collect()
}

/// `G(Π, I)`: as the F-reduct, but every aggregate is replaced by the atoms
/// of `I ∩ dom(A)`.
pub fn g_reduct(program: &Program, interp: &Interpretation) -> Program {
    program
        .rules
        .iter()
        .filter(|r| r.body.satisfied_by(interp))
        .map(|r| Rule {
            head: r.head.clone(),
            body: r
                .body
                .iter()
                .flat_map(|l| -> Vec<Literal> {
                    match l {
                        Literal::Atom { .. } if l.is_negative() => Vec::new(),
                        Literal::Atom { .. } => vec![l.clone()],
                        Literal::Aggregate(spec) => spec
                            .domain()
                            .filter(|a| interp.contains(a))
                            .cloned()
                            .map(Literal::positive)
                            .collect(),
                    }
                })
                .collect(),
        })
        .collect()
}

/// `T_Π(I)`: every head atom of every rule whose body `I` satisfies.
pub fn tp_step(program: &Program, interp: &Interpretation) -> Interpretation {
    program
        .rules
        .iter()
        .filter(|r| r.body.satisfied_by(interp))
        .flat_map(|r| r.head.iter().cloned())
        .collect()
}

/// Checks membership in ASP(M): no negation, no disjunction, monotone
/// aggregates only. Integrity constraints are admitted; they never add
/// atoms to `T_Π`.
pub fn check_asp_m(program: &Program) -> Result<(), SemanticsError> {
    for (i, rule) in program.rules.iter().enumerate() {
        let n = i + 1;
        if rule.is_disjunctive() {
            return Err(SemanticsError::NotAspM(format!(
                "rule {n} has a disjunctive head"
            )));
        }
        for literal in &rule.body {
            match literal {
                Literal::Atom {
                    atom,
                    negation_depth,
                } if *negation_depth > 0 => {
                    return Err(SemanticsError::NotAspM(format!(
                        "rule {n} negates `{atom}`"
                    )));
                }
                Literal::Aggregate(spec) => {
                    let class = classify_aggregate(spec)?;
                    if class != AggregateClass::Monotone {
                        return Err(SemanticsError::NotAspM(format!(
                            "rule {n} has a {class} aggregate `{}`",
                            crate::parser::render_aggregate(spec)
                        )));
                    }
                }
                Literal::Atom { .. } => {}
            }
        }
    }
    Ok(())
}

pub fn is_asp_m(program: &Program) -> bool {
    check_asp_m(program).is_ok()
}

/// Least fixpoint of `T_Π` for an ASP(M) program, iterating from `∅`.
pub fn tp_least_fixpoint(program: &Program) -> Result<Interpretation, SemanticsError> {
    check_asp_m(program)?;
    let mut current = Interpretation::new();
    // at most |At(Π)| + 1 applications
    loop {
        let next = tp_step(program, &current);
        if next == current {
            return Ok(current);
        }
        current = next;
    }
}

/// Negation-free, aggregate-free and disjunction-free (constraints allowed).
pub fn is_horn(program: &Program) -> bool {
    program.rules.iter().all(|r| {
        r.head.len() <= 1
            && r.body.iter().all(|l| {
                matches!(
                    l,
                    Literal::Atom {
                        negation_depth: 0,
                        ..
                    }
                )
            })
    })
}

/// Whether `I ⊨ Π` and no `J ⊂ I` satisfies `Π`.
///
/// Horn programs are decided by comparing `I` with the least fixpoint;
/// otherwise the subsets of `I` are searched. Panics if a non-Horn check is
/// requested for an interpretation of more than 64 atoms.
pub fn is_minimal_model(interp: &Interpretation, program: &Program) -> bool {
    if !program.satisfied_by(interp) {
        return false;
    }
    let atoms = program.atoms();
    if interp.iter().any(|a| !atoms.contains(a)) {
        // I ∩ At(Π) is a strictly smaller model
        return false;
    }
    if is_horn(program) {
        let lfp = tp_least_fixpoint(program).expect("Horn programs are in ASP(M)");
        return &lfp == interp;
    }
    let universe = Universe::new(interp.iter().cloned())
        .expect("non-Horn minimality checks support at most 64 atoms");
    let full = universe.full();
    let compiled = CompiledProgram::new(program, universe);
    compiled::is_minimal(&compiled.rules, compiled.universe.len(), full)
}

/// Exhaustive classification over the `2^|dom|` subsets of the domain.
pub fn classify_aggregate(spec: &AggregateSpec) -> Result<AggregateClass, SemanticsError> {
    let n = spec.domain_len();
    if n > MAX_CLASSIFY_DOMAIN {
        return Err(SemanticsError::DomainTooLarge {
            size: n,
            limit: MAX_CLASSIFY_DOMAIN,
        });
    }
    let weights: Vec<i64> = spec.elements().iter().map(|e| e.weight).collect();
    let table: Vec<bool> = (0..1usize << n)
        .map(|m| {
            compiled::evaluate(
                spec.func(),
                spec.guard(),
                (0..n).filter(|i| m & (1 << i) != 0).map(|i| weights[i]),
            )
        })
        .collect();
    Ok(classify_table(&table, n))
}

/// Classifies a truth table indexed by subset bitmask.
fn classify_table(table: &[bool], n: usize) -> AggregateClass {
    let upward_closed = (0..table.len())
        .filter(|&m| table[m])
        .all(|m| (0..n).all(|i| table[m | (1 << i)]));
    if upward_closed {
        return AggregateClass::Monotone;
    }
    // below[m]: some true subset of m; above[m]: some true superset of m.
    // Convex iff no false m sits between a true subset and a true superset.
    let mut below = table.to_vec();
    let mut above = table.to_vec();
    for i in 0..n {
        let bit = 1 << i;
        for m in 0..table.len() {
            if m & bit != 0 {
                below[m] |= below[m ^ bit];
            } else {
                above[m] |= above[m | bit];
            }
        }
    }
    if (0..table.len()).all(|m| table[m] || !(below[m] && above[m])) {
        AggregateClass::Convex
    } else {
        AggregateClass::NonConvex
    }
}

/// The strongest class among the program's aggregates, if any.
pub fn program_class(program: &Program) -> Result<Option<AggregateClass>, SemanticsError> {
    let mut strongest = None;
    for spec in program.aggregates() {
        let class = classify_aggregate(spec)?;
        strongest = strongest.max(Some(class));
    }
    Ok(strongest)
}
