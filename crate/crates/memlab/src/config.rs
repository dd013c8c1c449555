//! Membrane trees and configurations.
//!
//! A configuration is an unordered tree of labeled membranes rooted at the
//! skin. Every constructor normalizes the tree: children are kept sorted by
//! canonical key, so structurally congruent configurations compare equal and
//! positions (paths of child indices) are stable identifiers.

use std::fmt;

use thiserror::Error;

use crate::multiset::{Multiset, Timer};

/// Position of a membrane: child indices from the skin down.
pub type Path = Vec<usize>;

pub fn format_path(path: &[usize]) -> String {
    if path.is_empty() {
        "/".to_string()
    } else {
        path.iter().map(|i| format!("/{i}")).collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("the skin membrane cannot be dissolved")]
    DissolveSkin,
    #[error("no membrane at position {0}")]
    InvalidPath(String),
}

/// One membrane: a label, an optional lifetime, the interior object multiset,
/// the surface multiset (objects-on-surface systems only) and child
/// membranes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Membrane {
    pub label: String,
    pub timer: Timer,
    pub contents: Multiset,
    pub surface: Multiset,
    pub children: Vec<Membrane>,
}

impl Membrane {
    pub fn new(label: impl Into<String>) -> Self {
        Membrane {
            label: label.into(),
            timer: Timer::Infinite,
            contents: Multiset::new(),
            surface: Multiset::new(),
            children: Vec::new(),
        }
    }

    pub fn with_contents(mut self, contents: Multiset) -> Self {
        self.contents = contents;
        self
    }

    pub fn with_surface(mut self, surface: Multiset) -> Self {
        self.surface = surface;
        self
    }

    pub fn with_timer(mut self, t: u32) -> Self {
        self.timer = Timer::Finite(t);
        self
    }

    pub fn with_children(mut self, children: Vec<Membrane>) -> Self {
        self.children = children;
        self
    }

    /// Canonical text key. Two membranes get the same key iff they are
    /// isomorphic as unordered labeled trees with identical multisets and
    /// timers. Child order in memory is immaterial.
    pub fn canonical_key(&self) -> String {
        let mut keys: Vec<String> = self.children.iter().map(|c| c.canonical_key()).collect();
        keys.sort();
        self.key_from_sorted(&keys)
    }

    fn key_from_sorted(&self, child_keys: &[String]) -> String {
        let mut out = String::new();
        out.push_str(&self.label);
        if let Timer::Finite(t) = self.timer {
            out.push_str(&format!("@{t}"));
        }
        if !self.surface.is_empty() {
            out.push('(');
            out.push_str(&self.surface.to_string());
            out.push(')');
        }
        out.push('{');
        out.push_str(&self.contents.to_string());
        out.push(';');
        out.push_str(&child_keys.join(","));
        out.push('}');
        out
    }

    /// Sorts all children recursively by canonical key and returns this
    /// membrane's key.
    fn normalize(&mut self) -> String {
        let mut keyed: Vec<(String, Membrane)> = std::mem::take(&mut self.children)
            .into_iter()
            .map(|mut c| {
                let k = c.normalize();
                (k, c)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let keys: Vec<String> = keyed.iter().map(|(k, _)| k.clone()).collect();
        self.children = keyed.into_iter().map(|(_, c)| c).collect();
        self.key_from_sorted(&keys)
    }

    /// Number of membranes in this subtree, this one included.
    pub fn membrane_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.membrane_count()).sum::<usize>()
    }

    pub fn resolve(&self, path: &[usize]) -> Option<&Membrane> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get(i).and_then(|c| c.resolve(rest)),
        }
    }

    fn resolve_mut(&mut self, path: &[usize]) -> Option<&mut Membrane> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get_mut(i).and_then(|c| c.resolve_mut(rest)),
        }
    }

    fn for_each(&self, f: &mut impl FnMut(&Membrane)) {
        f(self);
        for c in &self.children {
            c.for_each(f);
        }
    }
}

/// A full configuration: the skin tree plus the environment multiset.
///
/// The environment collects objects expelled past the skin; no rule in scope
/// writes to it, so it is reported in traces but otherwise inert. The skin is
/// immortal: its timer is always `Infinite`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Configuration {
    skin: Membrane,
    environment: Multiset,
}

impl Configuration {
    /// Builds a configuration, normalizing child order everywhere.
    pub fn new(mut skin: Membrane) -> Self {
        skin.timer = Timer::Infinite;
        skin.normalize();
        Configuration { skin, environment: Multiset::new() }
    }

    pub fn skin(&self) -> &Membrane {
        &self.skin
    }

    pub fn environment(&self) -> &Multiset {
        &self.environment
    }

    pub fn canonical_key(&self) -> String {
        let mut key = self.skin.canonical_key();
        if !self.environment.is_empty() {
            key.push_str("+env{");
            key.push_str(&self.environment.to_string());
            key.push('}');
        }
        key
    }

    pub fn is_congruent(&self, other: &Configuration) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    pub fn resolve(&self, path: &[usize]) -> Option<&Membrane> {
        self.skin.resolve(path)
    }

    pub fn membrane_count(&self) -> usize {
        self.skin.membrane_count()
    }

    /// Every membrane paired with its path, in preorder.
    pub fn membranes(&self) -> Vec<(Path, &Membrane)> {
        fn walk<'a>(m: &'a Membrane, path: &mut Path, out: &mut Vec<(Path, &'a Membrane)>) {
            out.push((path.clone(), m));
            for (i, c) in m.children.iter().enumerate() {
                path.push(i);
                walk(c, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(&self.skin, &mut Vec::new(), &mut out);
        out
    }

    /// All objects in the configuration (contents and surfaces together),
    /// environment excluded.
    pub fn total_objects(&self) -> Multiset {
        let mut total = Multiset::new();
        self.skin.for_each(&mut |m| {
            total.extend(&m.contents);
            total.extend(&m.surface);
        });
        total
    }

    /// Multiset of membrane labels in the tree.
    pub fn label_multiset(&self) -> Multiset {
        use crate::multiset::{Obj, Symbol};
        let mut total = Multiset::new();
        self.skin.for_each(&mut |m| {
            total.insert(Obj::untimed(Symbol::plain(m.label.clone())), 1);
        });
        total
    }

    /// Removes the membrane at `target`, merging its contents and surface
    /// into the parent and lifting its children one level up.
    pub fn dissolve(&self, target: &[usize]) -> Result<Configuration, ModelError> {
        if target.is_empty() {
            return Err(ModelError::DissolveSkin);
        }
        let mut skin = self.skin.clone();
        let (parent_path, last) = target.split_at(target.len() - 1);
        let parent = skin
            .resolve_mut(parent_path)
            .filter(|p| last[0] < p.children.len())
            .ok_or_else(|| ModelError::InvalidPath(format_path(target)))?;
        let dissolved = parent.children.remove(last[0]);
        parent.contents.extend(&dissolved.contents);
        parent.surface.extend(&dissolved.surface);
        parent.children.extend(dissolved.children);
        let mut out = Configuration { skin, environment: self.environment.clone() };
        out.skin.normalize();
        Ok(out)
    }

    /// Replaces the whole tree; used by the engine after surgery. Normalizes.
    pub(crate) fn replace_skin(&self, mut skin: Membrane) -> Configuration {
        skin.timer = Timer::Infinite;
        skin.normalize();
        Configuration { skin, environment: self.environment.clone() }
    }
}

impl fmt::Display for Configuration {
    /// Human-readable nested rendering, one membrane per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn render(m: &Membrane, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let indent = "  ".repeat(depth);
            write!(f, "{indent}{}{}", m.label, m.timer)?;
            if !m.surface.is_empty() {
                write!(f, "({})", m.surface)?;
            }
            write!(f, "{{{}", m.contents)?;
            if m.children.is_empty() {
                writeln!(f, "}}")
            } else {
                writeln!(f)?;
                for c in &m.children {
                    render(c, depth + 1, f)?;
                }
                writeln!(f, "{indent}}}")
            }
        }
        render(&self.skin, 0, f)?;
        if !self.environment.is_empty() {
            writeln!(f, "env{{{}}}", self.environment)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::{Obj, Symbol};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn obj(name: &str) -> Obj {
        Obj::untimed(Symbol::plain(name))
    }

    fn leaf(label: &str, objs: &[&str]) -> Membrane {
        Membrane::new(label).with_contents(objs.iter().map(|o| obj(o)).collect())
    }

    #[test]
    fn child_order_is_immaterial() {
        let a = Configuration::new(
            Membrane::new("skin").with_children(vec![leaf("h", &[]), leaf("m", &[])]),
        );
        let b = Configuration::new(
            Membrane::new("skin").with_children(vec![leaf("m", &[]), leaf("h", &[])]),
        );
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert!(a.is_congruent(&b));
    }

    #[test]
    fn multiplicities_separate_keys() {
        let a = Configuration::new(
            Membrane::new("skin").with_children(vec![leaf("h", &["a", "a"])]),
        );
        let b = Configuration::new(Membrane::new("skin").with_children(vec![leaf("h", &["a"])]));
        assert_ne!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn congruence_is_reflexive_and_separates_duals() {
        let c = Configuration::new(
            Membrane::new("skin").with_children(vec![leaf("h", &["a"]), leaf("m", &[])]),
        );
        assert!(c.is_congruent(&c));
        let barred = Configuration::new(Membrane::new("skin").with_children(vec![
            Membrane::new("h").with_contents(Multiset::singleton(Obj::untimed(Symbol::co("a")))),
        ]));
        let plain = Configuration::new(
            Membrane::new("skin").with_children(vec![leaf("h", &["a"])]),
        );
        assert!(!barred.is_congruent(&plain));
    }

    #[test]
    fn timers_are_part_of_the_key() {
        let timed = Configuration::new(
            Membrane::new("skin").with_children(vec![Membrane::new("h").with_timer(3)]),
        );
        let untimed =
            Configuration::new(Membrane::new("skin").with_children(vec![Membrane::new("h")]));
        assert_ne!(timed.canonical_key(), untimed.canonical_key());
    }

    #[test]
    fn dissolve_merges_into_parent() {
        // skin[ m{a, h{b}} ]  --dissolve m-->  skin{a}[ h{b} ]
        let c = Configuration::new(Membrane::new("skin").with_children(vec![Membrane::new("m")
            .with_contents(Multiset::singleton(obj("a")))
            .with_children(vec![leaf("h", &["b"])])]));
        let d = c.dissolve(&[0]).unwrap();
        let expected = Configuration::new(
            Membrane::new("skin")
                .with_contents(Multiset::singleton(obj("a")))
                .with_children(vec![leaf("h", &["b"])]),
        );
        assert!(d.is_congruent(&expected));
    }

    #[test]
    fn dissolve_empty_membrane_leaves_empty_skin() {
        let c = Configuration::new(Membrane::new("skin").with_children(vec![leaf("m", &[])]));
        let d = c.dissolve(&[0]).unwrap();
        assert!(d.is_congruent(&Configuration::new(Membrane::new("skin"))));
    }

    #[test]
    fn dissolve_rejects_skin_and_bad_paths() {
        let c = Configuration::new(Membrane::new("skin").with_children(vec![leaf("m", &[])]));
        assert_eq!(c.dissolve(&[]), Err(ModelError::DissolveSkin));
        assert!(matches!(c.dissolve(&[4]), Err(ModelError::InvalidPath(_))));
    }

    #[test]
    fn dissolve_orders_commute() {
        // skin[ m{ h{ k{} } } ]: dissolving m then h equals h then m.
        let c = Configuration::new(Membrane::new("skin").with_children(vec![Membrane::new("m")
            .with_children(vec![
                Membrane::new("h").with_children(vec![Membrane::new("k")]),
            ])]));
        let m_first = c.dissolve(&[0]).unwrap(); // now skin[ h{k{}} ]
        let both_a = m_first.dissolve(&[0]).unwrap();
        let h_first = c.dissolve(&[0, 0]).unwrap(); // dissolve h inside m
        let both_b = h_first.dissolve(&[0]).unwrap();
        assert!(both_a.is_congruent(&both_b));
        let expected =
            Configuration::new(Membrane::new("skin").with_children(vec![Membrane::new("k")]));
        assert!(both_a.is_congruent(&expected));
    }

    #[test]
    fn dissolve_preserves_objects_and_drops_one_membrane() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let c = random_config(&mut rng, 6);
            let nodes = c.membranes();
            if nodes.len() < 2 {
                continue;
            }
            let (path, _) = &nodes[rng.gen_range(1..nodes.len())];
            let d = c.dissolve(path).unwrap();
            assert_eq!(d.total_objects(), c.total_objects());
            assert_eq!(d.membrane_count(), c.membrane_count() - 1);
        }
    }

    pub fn random_config(rng: &mut ChaCha8Rng, max_nodes: usize) -> Configuration {
        fn random_tree(rng: &mut ChaCha8Rng, budget: &mut usize, depth: usize) -> Membrane {
            let label = ["h", "m", "k"][rng.gen_range(0..3)];
            let mut m = Membrane::new(label);
            for _ in 0..rng.gen_range(0..3) {
                m.contents.insert(
                    Obj::untimed(Symbol::plain(["a", "b"][rng.gen_range(0..2)])),
                    rng.gen_range(1..3),
                );
            }
            while *budget > 0 && depth < 3 && rng.gen_bool(0.4) {
                *budget -= 1;
                m.children.push(random_tree(rng, budget, depth + 1));
            }
            m
        }
        let mut budget = max_nodes.saturating_sub(1);
        let mut skin = Membrane::new("skin");
        while budget > 0 && rng.gen_bool(0.7) {
            budget -= 1;
            skin.children.push(random_tree(rng, &mut budget, 1));
        }
        Configuration::new(skin)
    }

    #[test]
    fn canonical_key_is_permutation_invariant() {
        fn shuffle(m: &mut Membrane, rng: &mut ChaCha8Rng) {
            m.children.shuffle(rng);
            for c in &mut m.children {
                shuffle(c, rng);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let c = random_config(&mut rng, 8);
            let key = c.canonical_key();
            let mut scrambled = c.skin().clone();
            shuffle(&mut scrambled, &mut rng);
            let again = Configuration::new(scrambled);
            assert_eq!(again.canonical_key(), key);
        }
    }

    /// Brute-force unordered-tree isomorphism by child permutation matching.
    fn isomorphic(a: &Membrane, b: &Membrane) -> bool {
        if a.label != b.label
            || a.timer != b.timer
            || a.contents != b.contents
            || a.surface != b.surface
            || a.children.len() != b.children.len()
        {
            return false;
        }
        fn matching(av: &[Membrane], used: &mut Vec<bool>, bv: &[Membrane], i: usize) -> bool {
            if i == av.len() {
                return true;
            }
            for j in 0..bv.len() {
                if !used[j] && isomorphic(&av[i], &bv[j]) {
                    used[j] = true;
                    if matching(av, used, bv, i + 1) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        matching(&a.children, &mut vec![false; b.children.len()], &b.children, 0)
    }

    /// All unordered trees with exactly `n` nodes over 2 labels, no objects.
    fn all_trees(n: usize, labels: &[&str]) -> Vec<Membrane> {
        if n == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for &label in labels {
            for forest in all_forests(n - 1, labels) {
                out.push(Membrane::new(label).with_children(forest));
            }
        }
        out
    }

    /// All forests (ordered lists; duplicates arise) with `n` total nodes.
    fn all_forests(n: usize, labels: &[&str]) -> Vec<Vec<Membrane>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first_size in 1..=n {
            for tree in all_trees(first_size, labels) {
                for rest in all_forests(n - first_size, labels) {
                    let mut forest = vec![tree.clone()];
                    forest.extend(rest);
                    out.push(forest);
                }
            }
        }
        out
    }

    #[test]
    fn key_equality_matches_brute_force_isomorphism() {
        // Exhaustive over all label-decorated trees with <= 6 nodes rooted at
        // the skin, pairwise against the permutation-matching oracle.
        for n in 0..=5 {
            let configs: Vec<Configuration> = all_forests(n, &["h", "m"])
                .into_iter()
                .map(|f| Configuration::new(Membrane::new("skin").with_children(f)))
                .collect();
            for i in 0..configs.len() {
                for j in i..configs.len() {
                    let by_key = configs[i].canonical_key() == configs[j].canonical_key();
                    let by_oracle = isomorphic(configs[i].skin(), configs[j].skin());
                    assert_eq!(
                        by_key, by_oracle,
                        "key/oracle disagreement on trees {i} and {j} with {n}+1 nodes"
                    );
                }
            }
        }
    }

    #[test]
    fn distinct_key_count_matches_oracle_on_two_child_trees() {
        // All 2-child/2-label trees over {h,m}: distinct canonical keys must
        // count exactly the non-isomorphic trees found by the oracle.
        let configs: Vec<Configuration> = all_forests(2, &["h", "m"])
            .into_iter()
            .map(|f| Configuration::new(Membrane::new("skin").with_children(f)))
            .collect();
        let mut keys: Vec<String> = configs.iter().map(|c| c.canonical_key()).collect();
        keys.sort();
        keys.dedup();
        let mut classes: Vec<&Configuration> = Vec::new();
        for c in &configs {
            if !classes.iter().any(|r| isomorphic(r.skin(), c.skin())) {
                classes.push(c);
            }
        }
        assert_eq!(keys.len(), classes.len());
    }
}
