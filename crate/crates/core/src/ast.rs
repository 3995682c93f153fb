//! Abstract syntax for ground programs with aggregates, plus the size and
//! atom-set metrics shared by the other modules.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Prefix/infix marker reserved for atoms produced by the rewriter.
pub const RESERVED_MARKER: &str = "__";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AstError {
    #[error("invalid atom name `{0}`: expected [a-z][A-Za-z0-9_]*")]
    InvalidAtomName(String),
    #[error("atom name `{0}` uses the reserved marker `__`")]
    ReservedName(String),
    #[error("atom `{0}` occurs more than once in one aggregate")]
    DuplicateAggregateElement(Atom),
    #[error("{0} aggregate requires a nonempty element list")]
    EmptyAggregateDomain(AggregateFunction),
    #[error("{0} aggregate requires a comparator and a bound")]
    MissingGuard(AggregateFunction),
    #[error("{0} aggregate takes no comparator or bound")]
    UnexpectedGuard(AggregateFunction),
}

/// A propositional atom. Cloning is cheap; ordering is lexicographic by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Builds a user atom. Names must match `[a-z][A-Za-z0-9_]*`, must not
    /// contain `__` (reserved for generated atoms) and must not be the keyword
    /// `not`.
    pub fn new(name: &str) -> Result<Self, AstError> {
        if !is_identifier(name) || name == "not" {
            return Err(AstError::InvalidAtomName(name.to_string()));
        }
        if name.contains(RESERVED_MARKER) {
            return Err(AstError::ReservedName(name.to_string()));
        }
        Ok(Atom(name.into()))
    }

    /// Builds an atom that may carry the reserved marker, as produced by the
    /// rewriter (`p__t`, `p__g`, `p__f`, `__bot`).
    pub fn generated(name: &str) -> Result<Self, AstError> {
        let core = name.trim_start_matches('_');
        let leading = name.len() - core.len();
        if !(leading == 0 || leading == 2) || !is_identifier(core) || name == "not" {
            return Err(AstError::InvalidAtomName(name.to_string()));
        }
        Ok(Atom(name.into()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_generated(&self) -> bool {
        self.0.contains(RESERVED_MARKER)
    }

    /// `p__t`, the copy that is true in every model of the rewritten program.
    pub fn true_copy(&self) -> Atom {
        Atom(format!("{}__t", self.0).into())
    }

    /// `p__g`, the guessed copy that fixes aggregate values in the reduct.
    pub fn guess_copy(&self) -> Atom {
        Atom(format!("{}__g", self.0).into())
    }

    /// `p__f`, the atom standing for "p is false".
    pub fn false_copy(&self) -> Atom {
        Atom(format!("{}__f", self.0).into())
    }

    /// The shared falsity atom used by the non-convex negation rewriting.
    pub fn bottom() -> Atom {
        Atom("__bot".into())
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggregateFunction {
    Count,
    Sum,
    Avg,
    Min,
    Max,
    Odd,
    Even,
}

impl AggregateFunction {
    pub const ALL: [AggregateFunction; 7] = [
        AggregateFunction::Count,
        AggregateFunction::Sum,
        AggregateFunction::Avg,
        AggregateFunction::Min,
        AggregateFunction::Max,
        AggregateFunction::Odd,
        AggregateFunction::Even,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            AggregateFunction::Count => "count",
            AggregateFunction::Sum => "sum",
            AggregateFunction::Avg => "avg",
            AggregateFunction::Min => "min",
            AggregateFunction::Max => "max",
            AggregateFunction::Odd => "odd",
            AggregateFunction::Even => "even",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.keyword() == word)
    }

    /// Parity predicates carry no comparator or bound.
    pub fn is_parity(self) -> bool {
        matches!(self, AggregateFunction::Odd | AggregateFunction::Even)
    }

    /// Functions whose value ignores element weights.
    pub fn ignores_weights(self) -> bool {
        matches!(
            self,
            AggregateFunction::Count | AggregateFunction::Odd | AggregateFunction::Even
        )
    }

    pub fn allows_empty_domain(self) -> bool {
        matches!(self, AggregateFunction::Count | AggregateFunction::Sum)
    }
}

impl fmt::Display for AggregateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.keyword().to_uppercase())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comparator {
    Lt,
    Le,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl Comparator {
    pub const ALL: [Comparator; 6] = [
        Comparator::Lt,
        Comparator::Le,
        Comparator::Ge,
        Comparator::Gt,
        Comparator::Eq,
        Comparator::Ne,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
            Comparator::Eq => "=",
            Comparator::Ne => "!=",
        }
    }

    pub fn compare<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Eq => lhs == rhs,
            Comparator::Ne => lhs != rhs,
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AggregateElement {
    pub weight: i64,
    pub atom: Atom,
}

/// A ground aggregate atom: a Boolean function of the true atoms of its
/// domain. Elements are kept sorted by atom, so two specs over the same
/// element set compare equal regardless of the order they were written in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AggregateSpec {
    func: AggregateFunction,
    elements: Vec<AggregateElement>,
    guard: Option<(Comparator, i64)>,
}

impl AggregateSpec {
    pub fn new(
        func: AggregateFunction,
        elements: impl IntoIterator<Item = (i64, Atom)>,
        guard: Option<(Comparator, i64)>,
    ) -> Result<Self, AstError> {
        match (func.is_parity(), guard.is_some()) {
            (true, true) => return Err(AstError::UnexpectedGuard(func)),
            (false, false) => return Err(AstError::MissingGuard(func)),
            _ => {}
        }
        let mut elements: Vec<AggregateElement> = elements
            .into_iter()
            .map(|(weight, atom)| AggregateElement {
                weight: if func.ignores_weights() { 1 } else { weight },
                atom,
            })
            .collect();
        elements.sort_by(|a, b| a.atom.cmp(&b.atom));
        if let Some(pair) = elements.windows(2).find(|w| w[0].atom == w[1].atom) {
            return Err(AstError::DuplicateAggregateElement(pair[0].atom.clone()));
        }
        if elements.is_empty() && !func.allows_empty_domain() {
            return Err(AstError::EmptyAggregateDomain(func));
        }
        Ok(AggregateSpec {
            func,
            elements,
            guard,
        })
    }

    /// `count{atoms} cmp bound`.
    pub fn count(
        atoms: impl IntoIterator<Item = Atom>,
        cmp: Comparator,
        bound: i64,
    ) -> Result<Self, AstError> {
        Self::new(
            AggregateFunction::Count,
            atoms.into_iter().map(|a| (1, a)),
            Some((cmp, bound)),
        )
    }

    pub fn func(&self) -> AggregateFunction {
        self.func
    }

    pub fn elements(&self) -> &[AggregateElement] {
        &self.elements
    }

    pub fn guard(&self) -> Option<(Comparator, i64)> {
        self.guard
    }

    pub fn domain(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.elements.iter().map(|e| &e.atom)
    }

    pub fn domain_len(&self) -> usize {
        self.elements.len()
    }

    /// Same function, weights and guard over renamed element atoms.
    pub fn map_atoms(&self, mut rename: impl FnMut(&Atom) -> Atom) -> Self {
        let mut elements: Vec<AggregateElement> = self
            .elements
            .iter()
            .map(|e| AggregateElement {
                weight: e.weight,
                atom: rename(&e.atom),
            })
            .collect();
        elements.sort_by(|a, b| a.atom.cmp(&b.atom));
        AggregateSpec {
            func: self.func,
            elements,
            guard: self.guard,
        }
    }
}

/// A body literal. Aggregates are never negated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    /// `negation_depth` counts the `not` symbols in front of the atom.
    Atom {
        atom: Atom,
        negation_depth: u32,
    },
    Aggregate(AggregateSpec),
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal::Atom {
            atom,
            negation_depth: 0,
        }
    }

    pub fn negative(atom: Atom) -> Self {
        Literal::Atom {
            atom,
            negation_depth: 1,
        }
    }

    pub fn negated(atom: Atom, negation_depth: u32) -> Self {
        Literal::Atom {
            atom,
            negation_depth,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Literal::Atom { negation_depth, .. } if *negation_depth > 0)
    }

    pub fn atoms(&self) -> Box<dyn Iterator<Item = &Atom> + '_> {
        match self {
            Literal::Atom { atom, .. } => Box::new(std::iter::once(atom)),
            Literal::Aggregate(spec) => Box::new(spec.domain()),
        }
    }
}

impl From<AggregateSpec> for Literal {
    fn from(spec: AggregateSpec) -> Self {
        Literal::Aggregate(spec)
    }
}

/// `p1 | ... | pm :- l1, ..., ln.` An empty head is an integrity constraint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: BTreeSet<Atom>,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn new(
        head: impl IntoIterator<Item = Atom>,
        body: impl IntoIterator<Item = Literal>,
    ) -> Self {
        Rule {
            head: head.into_iter().collect(),
            body: body.into_iter().collect(),
        }
    }

    pub fn fact(atom: Atom) -> Self {
        Rule::new([atom], [])
    }

    pub fn constraint(body: impl IntoIterator<Item = Literal>) -> Self {
        Rule::new([], body)
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_disjunctive(&self) -> bool {
        self.head.len() > 1
    }

    pub fn aggregates(&self) -> impl Iterator<Item = &AggregateSpec> + '_ {
        self.body.iter().filter_map(|l| match l {
            Literal::Aggregate(spec) => Some(spec),
            Literal::Atom { .. } => None,
        })
    }

    /// Symbol count: one per head atom, one per (possibly negated) atom
    /// literal, and `|dom(A)|` per aggregate.
    pub fn size(&self) -> usize {
        self.head.len()
            + self
                .body
                .iter()
                .map(|l| match l {
                    Literal::Atom { .. } => 1,
                    Literal::Aggregate(spec) => spec.domain_len(),
                })
                .sum::<usize>()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.head
            .iter()
            .chain(self.body.iter().flat_map(Literal::atoms))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Self {
        Program {
            rules: rules.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    /// `At(Π)`: atoms in heads, body literals and aggregate domains.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(Rule::atoms).cloned().collect()
    }

    /// `‖Π‖`, the symbol-count size.
    pub fn size(&self) -> usize {
        self.rules.iter().map(Rule::size).sum()
    }

    pub fn aggregates(&self) -> impl Iterator<Item = &AggregateSpec> + '_ {
        self.rules.iter().flat_map(Rule::aggregates)
    }

    pub fn has_negation(&self) -> bool {
        self.rules
            .iter()
            .any(|r| r.body.iter().any(Literal::is_negative))
    }

    pub fn has_disjunction(&self) -> bool {
        self.rules.iter().any(Rule::is_disjunctive)
    }

    pub fn has_aggregates(&self) -> bool {
        self.aggregates().next().is_some()
    }

    pub fn max_negation_depth(&self) -> u32 {
        self.rules
            .iter()
            .flat_map(|r| &r.body)
            .filter_map(|l| match l {
                Literal::Atom { negation_depth, .. } => Some(*negation_depth),
                Literal::Aggregate(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Concatenation of rule lists.
    pub fn union(&self, other: &Program) -> Program {
        Program::new(self.rules.iter().chain(&other.rules).cloned())
    }
}

impl FromIterator<Rule> for Program {
    fn from_iter<T: IntoIterator<Item = Rule>>(iter: T) -> Self {
        Program::new(iter)
    }
}

/// `At(Π)`.
pub fn atoms_of(program: &Program) -> BTreeSet<Atom> {
    program.atoms()
}

/// `‖Π‖`.
pub fn size(program: &Program) -> usize {
    program.size()
}

/// A finite set of atoms.
///
/// The canonical order on interpretations is by cardinality first, then
/// lexicographic over the sorted atom lists.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Interpretation(BTreeSet<Atom>);

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        self.0.insert(atom)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.0.iter()
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.0
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `I ∩ C`.
    pub fn restrict(&self, context: &BTreeSet<Atom>) -> Interpretation {
        Interpretation(self.0.intersection(context).cloned().collect())
    }
}

impl Ord for Interpretation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for Interpretation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Atom> for Interpretation {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl From<BTreeSet<Atom>> for Interpretation {
    fn from(atoms: BTreeSet<Atom>) -> Self {
        Interpretation(atoms)
    }
}

impl<'a> IntoIterator for &'a Interpretation {
    type Item = &'a Atom;
    type IntoIter = std::collections::btree_set::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Renders as `{a,c}`.
impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, atom) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{atom}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `S ≡_C S'`: equal cardinality and equal projections onto `context`.
pub fn equivalent_in_context<'a, 'b>(
    left: impl IntoIterator<Item = &'a Interpretation>,
    right: impl IntoIterator<Item = &'b Interpretation>,
    context: &BTreeSet<Atom>,
) -> bool {
    let left: BTreeSet<&Interpretation> = left.into_iter().collect();
    let right: BTreeSet<&Interpretation> = right.into_iter().collect();
    if left.len() != right.len() {
        return false;
    }
    let project = |s: &BTreeSet<&Interpretation>| -> BTreeSet<Interpretation> {
        s.iter().map(|i| i.restrict(context)).collect()
    };
    project(&left) == project(&right)
}

/// Builds an atom from a name known to be valid; panics otherwise.
/// Intended for tests and literals in code.
pub fn atom(name: &str) -> Atom {
    Atom::new(name)
        .or_else(|_| Atom::generated(name))
        .unwrap_or_else(|e| panic!("{e}"))
}

/// Builds an interpretation from atom names; see [`atom`].
pub fn interp<'a>(names: impl IntoIterator<Item = &'a str>) -> Interpretation {
    names.into_iter().map(atom).collect()
}
