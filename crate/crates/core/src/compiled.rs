//! Bitset form of a ground program over a universe of at most 64 atoms.
//!
//! Atoms outside the universe are treated as fixed false: literals over them
//! are folded to constants at compile time and aggregate elements over them
//! are dropped, which leaves every aggregate value unchanged.

use std::collections::HashMap;

use crate::ast::{
    AggregateFunction, AggregateSpec, Atom, Comparator, Interpretation, Literal, Program, Rule,
};

pub(crate) type Mask = u64;

pub(crate) const MAX_UNIVERSE: usize = Mask::BITS as usize;

/// Truth value of an aggregate given the weights of its selected elements.
/// Sums are accumulated in `i128`, so no admissible input can overflow.
pub(crate) fn evaluate(
    func: AggregateFunction,
    guard: Option<(Comparator, i64)>,
    selected: impl Iterator<Item = i64>,
) -> bool {
    let mut count: i128 = 0;
    let mut sum: i128 = 0;
    let mut min: Option<i64> = None;
    let mut max: Option<i64> = None;
    for w in selected {
        count += 1;
        sum += i128::from(w);
        min = Some(min.map_or(w, |m| m.min(w)));
        max = Some(max.map_or(w, |m| m.max(w)));
    }
    let (cmp, bound) = match (func, guard) {
        (AggregateFunction::Odd, _) => return count % 2 == 1,
        (AggregateFunction::Even, _) => return count % 2 == 0,
        (_, Some(g)) => g,
        (_, None) => unreachable!("non-parity aggregates carry a guard"),
    };
    let bound128 = i128::from(bound);
    match func {
        AggregateFunction::Count => cmp.compare(count, bound128),
        AggregateFunction::Sum => cmp.compare(sum, bound128),
        // mean ⋈ bound  ⇔  sum ⋈ bound·count, for count > 0
        AggregateFunction::Avg => count > 0 && cmp.compare(sum, bound128 * count),
        AggregateFunction::Min => min.is_some_and(|m| cmp.compare(m, bound)),
        AggregateFunction::Max => max.is_some_and(|m| cmp.compare(m, bound)),
        AggregateFunction::Odd | AggregateFunction::Even => unreachable!(),
    }
}

/// Sorted atom universe with a bit per atom.
#[derive(Debug, Clone)]
pub(crate) struct Universe {
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
}

impl Universe {
    /// `None` when more than 64 atoms are supplied.
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Option<Self> {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort();
        atoms.dedup();
        if atoms.len() > MAX_UNIVERSE {
            return None;
        }
        let index = atoms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        Some(Universe { atoms, index })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn full(&self) -> Mask {
        if self.atoms.len() == MAX_UNIVERSE {
            Mask::MAX
        } else {
            (1 << self.atoms.len()) - 1
        }
    }

    pub fn bit(&self, atom: &Atom) -> Option<Mask> {
        self.index.get(atom).map(|&i| 1 << i)
    }

    pub fn interpretation(&self, mask: Mask) -> Interpretation {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledAggregate {
    func: AggregateFunction,
    guard: Option<(Comparator, i64)>,
    elements: Vec<(Mask, i64)>,
    domain: Mask,
}

impl CompiledAggregate {
    fn compile(spec: &AggregateSpec, universe: &Universe) -> Self {
        let elements: Vec<(Mask, i64)> = spec
            .elements()
            .iter()
            .filter_map(|e| universe.bit(&e.atom).map(|b| (b, e.weight)))
            .collect();
        let domain = elements.iter().fold(0, |m, (b, _)| m | b);
        CompiledAggregate {
            func: spec.func(),
            guard: spec.guard(),
            elements,
            domain,
        }
    }

    pub fn eval(&self, mask: Mask) -> bool {
        evaluate(
            self.func,
            self.guard,
            self.elements
                .iter()
                .filter(|(b, _)| mask & b != 0)
                .map(|&(_, w)| w),
        )
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledRule {
    pub head: Mask,
    /// Atoms without negation.
    pub pos: Mask,
    /// Atoms under an even, nonzero number of negations (true iff present).
    pub neg_even: Mask,
    /// Atoms under an odd number of negations (true iff absent).
    pub neg_odd: Mask,
    pub aggs: Vec<CompiledAggregate>,
}

impl CompiledRule {
    /// `None` when the body is constantly false over the universe.
    fn compile(rule: &Rule, universe: &Universe) -> Option<Self> {
        let head = rule
            .head
            .iter()
            .filter_map(|a| universe.bit(a))
            .fold(0, |m, b| m | b);
        let mut out = CompiledRule {
            head,
            pos: 0,
            neg_even: 0,
            neg_odd: 0,
            aggs: Vec::new(),
        };
        for literal in &rule.body {
            match literal {
                Literal::Atom {
                    atom,
                    negation_depth,
                } => match (universe.bit(atom), negation_depth % 2 == 1) {
                    (None, true) => {}
                    (None, false) => return None,
                    (Some(b), true) => out.neg_odd |= b,
                    (Some(b), false) if *negation_depth == 0 => out.pos |= b,
                    (Some(b), false) => out.neg_even |= b,
                },
                Literal::Aggregate(spec) => {
                    out.aggs.push(CompiledAggregate::compile(spec, universe));
                }
            }
        }
        Some(out)
    }

    pub fn scope(&self) -> Mask {
        self.aggs.iter().fold(
            self.head | self.pos | self.neg_even | self.neg_odd,
            |m, a| m | a.domain,
        )
    }

    pub fn body_holds(&self, mask: Mask) -> bool {
        let need = self.pos | self.neg_even;
        mask & need == need && mask & self.neg_odd == 0 && self.aggs.iter().all(|a| a.eval(mask))
    }

    pub fn satisfied(&self, mask: Mask) -> bool {
        mask & self.head != 0 || !self.body_holds(mask)
    }

    pub fn is_horn(&self) -> bool {
        self.aggs.is_empty()
            && self.neg_even == 0
            && self.neg_odd == 0
            && self.head.count_ones() <= 1
    }

    /// Rule of the F-reduct (caller keeps only rules whose body holds).
    pub fn f_reduct(&self) -> CompiledRule {
        CompiledRule {
            head: self.head,
            pos: self.pos,
            neg_even: 0,
            neg_odd: 0,
            aggs: self.aggs.clone(),
        }
    }

    /// Rule of the G-reduct w.r.t. `interp`: each aggregate becomes the
    /// conjunction of its true domain atoms.
    pub fn g_reduct(&self, interp: Mask) -> CompiledRule {
        CompiledRule {
            head: self.head,
            pos: self
                .aggs
                .iter()
                .fold(self.pos, |m, a| m | (a.domain & interp)),
            neg_even: 0,
            neg_odd: 0,
            aggs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledProgram {
    pub universe: Universe,
    pub rules: Vec<CompiledRule>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ReductKind {
    F,
    G,
}

impl CompiledProgram {
    pub fn new(program: &Program, universe: Universe) -> Self {
        let rules = program
            .rules
            .iter()
            .filter_map(|r| CompiledRule::compile(r, &universe))
            .collect();
        CompiledProgram { universe, rules }
    }

    pub fn reduct(&self, kind: ReductKind, interp: Mask) -> Vec<CompiledRule> {
        self.rules
            .iter()
            .filter(|r| r.body_holds(interp))
            .map(|r| match kind {
                ReductKind::F => r.f_reduct(),
                ReductKind::G => r.g_reduct(interp),
            })
            .collect()
    }

    /// Calls `visit` on every model inside `free` (bits outside it stay
    /// false); see [`search`].
    pub fn models(&self, free: Mask, visit: impl FnMut(Mask) -> bool) {
        search(&self.rules, self.universe.len(), free, visit);
    }
}

/// `T_Π(I)`: union of the heads of rules whose body holds.
pub(crate) fn tp_step(rules: &[CompiledRule], mask: Mask) -> Mask {
    rules
        .iter()
        .filter(|r| r.body_holds(mask))
        .fold(0, |m, r| m | r.head)
}

/// Least fixpoint of `T_Π` from the empty set; meaningful for programs whose
/// operator is monotone.
pub(crate) fn least_fixpoint(rules: &[CompiledRule]) -> Mask {
    let mut current = 0;
    loop {
        let next = tp_step(rules, current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Whether `interp` (a model of `reduct`) has no strict subset satisfying
/// `reduct`. Horn reducts are decided by a fixpoint; anything else by
/// searching the subsets of `interp`.
pub(crate) fn is_minimal(reduct: &[CompiledRule], universe_len: usize, interp: Mask) -> bool {
    if reduct.iter().all(CompiledRule::is_horn) {
        return least_fixpoint(reduct) == interp;
    }
    let mut minimal = true;
    search(reduct, universe_len, interp, |j| {
        if j != interp {
            minimal = false;
        }
        minimal
    });
    minimal
}

/// Depth-first enumeration of the assignments over bits `0..n` restricted to
/// `free`, trying false before true. Each rule is checked as soon as its
/// highest-numbered atom is assigned, so violated prefixes are cut early.
/// `visit` returns `false` to stop the search.
pub(crate) fn search(
    rules: &[CompiledRule],
    n: usize,
    free: Mask,
    mut visit: impl FnMut(Mask) -> bool,
) {
    let mut buckets: Vec<Vec<&CompiledRule>> = vec![Vec::new(); n];
    for rule in rules {
        let scope = rule.scope();
        if scope == 0 {
            if !rule.satisfied(0) {
                return;
            }
        } else {
            let top = (Mask::BITS - 1 - scope.leading_zeros()) as usize;
            buckets[top].push(rule);
        }
    }
    fn go(
        k: usize,
        mask: Mask,
        n: usize,
        free: Mask,
        buckets: &[Vec<&CompiledRule>],
        visit: &mut dyn FnMut(Mask) -> bool,
    ) -> bool {
        if k == n {
            return visit(mask);
        }
        let bit: Mask = 1 << k;
        for m in [mask, mask | bit] {
            if m & bit != 0 && free & bit == 0 {
                continue;
            }
            if buckets[k].iter().all(|r| r.satisfied(m)) && !go(k + 1, m, n, free, buckets, visit) {
                return false;
            }
        }
        true
    }
    go(0, 0, n, free, &buckets, &mut visit);
}
