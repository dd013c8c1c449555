//! Object symbols, timers and finite multisets of timed objects.

use std::collections::BTreeMap;
use std::fmt;

/// An object symbol: an identifier plus a bar flag marking the co-object.
///
/// `a` and `~a` are distinct symbols; [`Symbol::dual`] swaps between them and
/// is an involution.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol {
    pub name: String,
    pub barred: bool,
}

impl Symbol {
    pub fn plain(name: impl Into<String>) -> Self {
        Symbol { name: name.into(), barred: false }
    }

    pub fn co(name: impl Into<String>) -> Self {
        Symbol { name: name.into(), barred: true }
    }

    /// The dual (co-object) of this symbol.
    pub fn dual(&self) -> Self {
        Symbol { name: self.name.clone(), barred: !self.barred }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "~{}", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// Remaining lifetime of an object occurrence or a membrane, in steps.
///
/// `Finite(t)` counts down while the item is idle; `Infinite` never does.
/// The derived order puts every finite value below `Infinite`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Timer {
    Finite(u32),
    Infinite,
}

impl Timer {
    pub fn is_finite(self) -> bool {
        matches!(self, Timer::Finite(_))
    }

    /// One tick down; saturates at zero and leaves `Infinite` alone.
    pub fn decremented(self) -> Timer {
        match self {
            Timer::Finite(t) => Timer::Finite(t.saturating_sub(1)),
            Timer::Infinite => Timer::Infinite,
        }
    }
}

impl fmt::Display for Timer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timer::Finite(t) => write!(f, "@{t}"),
            Timer::Infinite => Ok(()),
        }
    }
}

/// One object occurrence kind: a symbol together with its timer.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Obj {
    pub symbol: Symbol,
    pub timer: Timer,
}

impl Obj {
    pub fn untimed(symbol: Symbol) -> Self {
        Obj { symbol, timer: Timer::Infinite }
    }

    pub fn timed(symbol: Symbol, t: u32) -> Self {
        Obj { symbol, timer: Timer::Finite(t) }
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.symbol, self.timer)
    }
}

/// A finite multiset of timed objects.
///
/// No entry ever has multiplicity zero, so structural equality is multiset
/// equality and iteration order is deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Multiset {
    counts: BTreeMap<Obj, u64>,
}

impl Multiset {
    pub fn new() -> Self {
        Multiset::default()
    }

    pub fn singleton(obj: Obj) -> Self {
        let mut m = Multiset::new();
        m.insert(obj, 1);
        m
    }

    pub fn from_objs(objs: impl IntoIterator<Item = Obj>) -> Self {
        let mut m = Multiset::new();
        for o in objs {
            m.insert(o, 1);
        }
        m
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of occurrences (with multiplicity).
    pub fn len(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, obj: &Obj) -> u64 {
        self.counts.get(obj).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, obj: Obj, n: u64) {
        if n > 0 {
            *self.counts.entry(obj).or_insert(0) += n;
        }
    }

    /// Removes `n` occurrences of `obj`; fails without modifying anything if
    /// fewer are present.
    pub fn remove(&mut self, obj: &Obj, n: u64) -> bool {
        if n == 0 {
            return true;
        }
        match self.counts.get_mut(obj) {
            Some(c) if *c > n => {
                *c -= n;
                true
            }
            Some(c) if *c == n => {
                self.counts.remove(obj);
                true
            }
            _ => false,
        }
    }

    pub fn extend(&mut self, other: &Multiset) {
        for (obj, n) in &other.counts {
            self.insert(obj.clone(), *n);
        }
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    /// Multiset difference; `None` unless `other ⊆ self`.
    pub fn difference(&self, other: &Multiset) -> Option<Multiset> {
        let mut out = self.clone();
        for (obj, n) in &other.counts {
            if !out.remove(obj, *n) {
                return None;
            }
        }
        Some(out)
    }

    pub fn is_subset_of(&self, other: &Multiset) -> bool {
        self.counts.iter().all(|(obj, n)| other.count(obj) >= *n)
    }

    /// Distinct entries with their multiplicities, in symbol order.
    pub fn iter(&self) -> impl Iterator<Item = (&Obj, u64)> {
        self.counts.iter().map(|(o, n)| (o, *n))
    }

    /// Entries whose symbol matches, regardless of timer.
    pub fn variants_of<'a>(
        &'a self,
        symbol: &'a Symbol,
    ) -> impl Iterator<Item = (&'a Obj, u64)> + 'a {
        self.counts
            .iter()
            .filter(move |(o, _)| &o.symbol == symbol)
            .map(|(o, n)| (o, *n))
    }

    /// The same multiset with every timer erased to `Infinite`.
    pub fn erase_timers(&self) -> Multiset {
        let mut out = Multiset::new();
        for (obj, n) in self.iter() {
            out.insert(Obj::untimed(obj.symbol.clone()), n);
        }
        out
    }
}

impl fmt::Display for Multiset {
    /// Comma-joined entries, `obj` or `obj*count`, in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (obj, n) in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if n == 1 {
                write!(f, "{obj}")?;
            } else {
                write!(f, "{obj}*{n}")?;
            }
        }
        Ok(())
    }
}

impl FromIterator<Obj> for Multiset {
    fn from_iter<I: IntoIterator<Item = Obj>>(iter: I) -> Self {
        Multiset::from_objs(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn sym(name: &str) -> Symbol {
        Symbol::plain(name)
    }

    #[test]
    fn dual_is_an_involution() {
        let a = sym("a");
        assert_eq!(a.dual().dual(), a);
        assert_ne!(a.dual(), a);
        assert_eq!(a.dual(), Symbol::co("a"));
    }

    #[test]
    fn remove_fails_without_enough_occurrences() {
        let mut m = Multiset::new();
        m.insert(Obj::untimed(sym("a")), 2);
        assert!(!m.remove(&Obj::untimed(sym("a")), 3));
        assert_eq!(m.count(&Obj::untimed(sym("a"))), 2);
        assert!(m.remove(&Obj::untimed(sym("a")), 2));
        assert!(m.is_empty());
    }

    #[test]
    fn timer_variants_are_distinct_entries() {
        let mut m = Multiset::new();
        m.insert(Obj::timed(sym("a"), 1), 1);
        m.insert(Obj::timed(sym("a"), 2), 1);
        m.insert(Obj::untimed(sym("a")), 1);
        assert_eq!(m.len(), 3);
        assert_eq!(m.variants_of(&sym("a")).count(), 3);
        assert_eq!(m.erase_timers().count(&Obj::untimed(sym("a"))), 3);
    }

    fn random_multiset(rng: &mut ChaCha8Rng) -> Multiset {
        let mut m = Multiset::new();
        for _ in 0..rng.gen_range(0..6) {
            let name = ["a", "b", "c"][rng.gen_range(0..3)];
            let symbol = if rng.gen_bool(0.3) { Symbol::co(name) } else { sym(name) };
            let timer = if rng.gen_bool(0.25) {
                Timer::Finite(rng.gen_range(0..4))
            } else {
                Timer::Infinite
            };
            m.insert(Obj { symbol, timer }, rng.gen_range(1..3));
        }
        m
    }

    #[test]
    fn multiset_laws_hold_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = random_multiset(&mut rng);
            let b = random_multiset(&mut rng);
            let u = a.union(&b);
            assert_eq!(u.len(), a.len() + b.len());
            assert_eq!(u.difference(&b).expect("b is a subset of a ∪ b"), a);
            assert!(a.is_subset_of(&u) && b.is_subset_of(&u));
        }
    }

    #[test]
    fn display_orders_entries_canonically() {
        let mut m = Multiset::new();
        m.insert(Obj::untimed(Symbol::co("c")), 1);
        m.insert(Obj::untimed(sym("b")), 2);
        m.insert(Obj::timed(sym("a"), 3), 1);
        assert_eq!(m.to_string(), "a@3,b*2,~c");
    }
}
