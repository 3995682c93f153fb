//! Exact stable-model enumeration under F- and G-semantics, the polynomial
//! ASP(M) path for G, and the coherence / cautious / brave decision problems.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ast::{Atom, Interpretation, Program};
use crate::compiled::{self, CompiledProgram, ReductKind, Universe, MAX_UNIVERSE};
use crate::rewriter::{self, Method, RewriteError, RewriteOptions};
use crate::semantics::{self, f_reduct, g_reduct, is_minimal_model, SemanticsError};

pub const DEFAULT_MAX_ATOMS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonError {
    #[error("program has {atoms} atoms; the enumeration limit is {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    F,
    G,
}

impl Semantics {
    fn reduct_kind(self) -> ReductKind {
        match self {
            Semantics::F => ReductKind::F,
            Semantics::G => ReductKind::G,
        }
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f" | "F" => Ok(Semantics::F),
            "g" | "G" => Ok(Semantics::G),
            other => Err(format!("unknown semantics `{other}`")),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::F => "f",
            Semantics::G => "g",
        })
    }
}

/// Interpretations in canonical order (cardinality, then lexicographic).
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ModelSet(BTreeSet<Interpretation>);

impl ModelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, interp: &Interpretation) -> bool {
        self.0.contains(interp)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interpretation> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Each model intersected with `context`; duplicates collapse.
    pub fn project(&self, context: &BTreeSet<Atom>) -> ModelSet {
        self.0.iter().map(|i| i.restrict(context)).collect()
    }
}

impl FromIterator<Interpretation> for ModelSet {
    fn from_iter<T: IntoIterator<Item = Interpretation>>(iter: T) -> Self {
        ModelSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a ModelSet {
    type Item = &'a Interpretation;
    type IntoIter = std::collections::btree_set::Iter<'a, Interpretation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// `I ⊨ Π` and `I` is minimal for the reduct of `Π` w.r.t. `I`.
pub fn is_stable(program: &Program, interp: &Interpretation, sem: Semantics) -> bool {
    if !semantics::satisfies(interp, program) {
        return false;
    }
    let reduct = match sem {
        Semantics::F => f_reduct(program, interp),
        Semantics::G => g_reduct(program, interp),
    };
    is_minimal_model(interp, &reduct)
}

/// G-stable models of an ASP(M) program without enumeration: with `I` the
/// least fixpoint of `T_Π` and `J` that of `T_G(Π,I)`, the result is `{I}`
/// when `I = J` (and `I` satisfies any integrity constraints), else empty.
pub fn gsm_asp_m(program: &Program) -> Result<ModelSet, SemanticsError> {
    let least = semantics::tp_least_fixpoint(program)?;
    let reduct_fixpoint = semantics::tp_least_fixpoint(&g_reduct(program, &least))?;
    if least == reduct_fixpoint && semantics::satisfies(&least, program) {
        Ok([least].into_iter().collect())
    } else {
        Ok(ModelSet::new())
    }
}

/// The enumerating reasoner. `max_atoms` bounds the atoms of any program it
/// enumerates (including rewritten programs); it can never exceed 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reasoner {
    max_atoms: usize,
}

impl Default for Reasoner {
    fn default() -> Self {
        Reasoner {
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

impl Reasoner {
    pub fn new(max_atoms: usize) -> Self {
        Reasoner {
            max_atoms: max_atoms.min(MAX_UNIVERSE),
        }
    }

    pub fn max_atoms(&self) -> usize {
        self.max_atoms
    }

    fn compile(&self, program: &Program) -> Result<CompiledProgram, ReasonError> {
        let atoms = program.atoms();
        if atoms.len() > self.max_atoms {
            return Err(ReasonError::TooManyAtoms {
                atoms: atoms.len(),
                limit: self.max_atoms,
            });
        }
        let universe = Universe::new(atoms).expect("bounded by max_atoms");
        Ok(CompiledProgram::new(program, universe))
    }

    /// All `sem`-stable models, by a pruned search over the subsets of
    /// `At(Π)` followed by a minimality check of each model.
    pub fn stable_models(
        &self,
        program: &Program,
        sem: Semantics,
    ) -> Result<ModelSet, ReasonError> {
        let compiled = self.compile(program)?;
        let n = compiled.universe.len();
        let kind = sem.reduct_kind();
        let mut stable = Vec::new();
        compiled.models(compiled.universe.full(), |m| {
            let reduct = compiled.reduct(kind, m);
            if compiled::is_minimal(&reduct, n, m) {
                stable.push(m);
            }
            true
        });
        Ok(stable
            .into_iter()
            .map(|m| compiled.universe.interpretation(m))
            .collect())
    }

    pub fn check_coherence(&self, program: &Program, sem: Semantics) -> Result<bool, ReasonError> {
        Ok(!self.models_for_query(program, sem)?.is_empty())
    }

    /// True iff every stable model contains `atom`; true when incoherent.
    pub fn cautious(
        &self,
        program: &Program,
        atom: &Atom,
        sem: Semantics,
    ) -> Result<bool, ReasonError> {
        Ok(self
            .models_for_query(program, sem)?
            .iter()
            .all(|m| m.contains(atom)))
    }

    /// True iff some stable model contains `atom`; false when incoherent.
    pub fn brave(
        &self,
        program: &Program,
        atom: &Atom,
        sem: Semantics,
    ) -> Result<bool, ReasonError> {
        Ok(self
            .models_for_query(program, sem)?
            .iter()
            .any(|m| m.contains(atom)))
    }

    /// Uses the fixpoint path for G-semantics on ASP(M) programs.
    fn models_for_query(&self, program: &Program, sem: Semantics) -> Result<ModelSet, ReasonError> {
        if sem == Semantics::G && semantics::is_asp_m(program) {
            return Ok(gsm_asp_m(program)?);
        }
        self.stable_models(program, sem)
    }

    /// F-stable models of `rew(Π)` or `str(Π)`, before projection.
    pub fn rewritten_models(
        &self,
        program: &Program,
        method: Method,
        options: RewriteOptions,
    ) -> Result<ModelSet, ReasonError> {
        let rewritten = rewriter::rewrite(program, method, options)?;
        self.stable_models(&rewritten, Semantics::F)
    }

    /// G-stable models computed through compilation into F-semantics: the
    /// F-stable models of the rewritten program projected onto `At(Π)`.
    pub fn solve_via_rewriting(
        &self,
        program: &Program,
        method: Method,
        options: RewriteOptions,
    ) -> Result<ModelSet, ReasonError> {
        Ok(self
            .rewritten_models(program, method, options)?
            .project(&program.atoms()))
    }
}
