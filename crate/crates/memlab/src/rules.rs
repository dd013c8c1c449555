//! Rule schemas and system definitions for the `.mem` language.

use std::collections::BTreeSet;
use std::fmt;

use crate::config::Configuration;
use crate::multiset::{Multiset, Symbol};

/// Source position (1-based) of a rule or membrane in its `.mem` file.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Whether objects live inside membranes or on their surfaces.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SystemKind {
    Plain,
    Surface,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::Plain => "plain",
            SystemKind::Surface => "surface",
        })
    }
}

/// One rewrite rule. Mutual and surface families consume a dual pair: the
/// written trigger in the first membrane and its co-object in the partner.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rule {
    /// `evo h(a -> w)`: rewrite one `a` into `w` inside a membrane labeled `h`.
    Evo { at: String, trigger: Symbol, output: Multiset },
    /// `endo h(a -> w) into m`: `[a]_h [ ]_m -> [[w]_h]_m`.
    Endo { mover: String, trigger: Symbol, target: String, output: Multiset },
    /// `exo h(a -> w) from m`: `[[a]_h]_m -> [w]_h [ ]_m`.
    Exo { mover: String, trigger: Symbol, host: String, output: Multiset },
    /// `fendo h into m(a -> w)`: `[ ]_h [a]_m -> [[ ]_h w]_m` — the trigger
    /// sits in the stationary target.
    Fendo { mover: String, target: String, trigger: Symbol, output: Multiset },
    /// `fexo h from m(a -> w)`: `[[ ]_h a]_m -> [ ]_h [w]_m` — the trigger
    /// sits in the host being exited.
    Fexo { mover: String, host: String, trigger: Symbol, output: Multiset },
    /// `mendo h(a -> u) m(~a -> v)`: `[a]_h [~a]_m -> [[u]_h v]_m`.
    MutualEndo {
        mover: String,
        trigger: Symbol,
        mover_output: Multiset,
        target: String,
        target_output: Multiset,
    },
    /// `mexo h(a -> u) m(~a -> v)`: `[[a]_h ~a]_m -> [u]_h [v]_m`.
    MutualExo {
        mover: String,
        trigger: Symbol,
        mover_output: Multiset,
        host: String,
        host_output: Multiset,
    },
    /// `pino h(a : u -> b)`: on a membrane labeled `h` whose surface holds
    /// `a` and `u`, consume `a` and pinch off a new child (same label) whose
    /// surface is `b` plus the relocated `u`; the rest stays on the parent.
    Pino { at: String, trigger: Symbol, inner: Multiset, fresh: Multiset },
    /// `sexo h(a -> b) from m`: `[[Q]_(a,u) P]_(~a,v) -> Q | [P]_(b,u,v)` —
    /// the inner membrane fuses into its parent, expelling its interior.
    SurfaceExo { inner: String, trigger: Symbol, outer: String, fresh: Multiset },
    /// `phago h(a) by m wrap k(b)`: `[ ]_(a,u) | [ ]_(~a,v) ->
    /// [ [[ ]_(u)]_(b) ]_(v)` — the engulfer swallows the victim inside a
    /// fresh wrap membrane labeled `k` with surface `b`.
    Phago {
        victim: String,
        trigger: Symbol,
        engulfer: String,
        wrap_label: String,
        fresh: Multiset,
    },
}

impl Rule {
    pub fn keyword(&self) -> &'static str {
        match self {
            Rule::Evo { .. } => "evo",
            Rule::Endo { .. } => "endo",
            Rule::Exo { .. } => "exo",
            Rule::Fendo { .. } => "fendo",
            Rule::Fexo { .. } => "fexo",
            Rule::MutualEndo { .. } => "mendo",
            Rule::MutualExo { .. } => "mexo",
            Rule::Pino { .. } => "pino",
            Rule::SurfaceExo { .. } => "sexo",
            Rule::Phago { .. } => "phago",
        }
    }

    /// Surface families act on surface multisets and only occur in
    /// `kind surface` systems.
    pub fn is_surface_family(&self) -> bool {
        matches!(self, Rule::Pino { .. } | Rule::SurfaceExo { .. } | Rule::Phago { .. })
    }

    /// Labels the rule refers to, paired with their role for diagnostics.
    pub fn label_refs(&self) -> Vec<(&str, &'static str)> {
        match self {
            Rule::Evo { at, .. } => vec![(at, "at")],
            Rule::Endo { mover, target, .. } => vec![(mover, "mover"), (target, "target")],
            Rule::Exo { mover, host, .. } => vec![(mover, "mover"), (host, "host")],
            Rule::Fendo { mover, target, .. } => vec![(mover, "mover"), (target, "target")],
            Rule::Fexo { mover, host, .. } => vec![(mover, "mover"), (host, "host")],
            Rule::MutualEndo { mover, target, .. } => vec![(mover, "mover"), (target, "target")],
            Rule::MutualExo { mover, host, .. } => vec![(mover, "mover"), (host, "host")],
            Rule::Pino { at, .. } => vec![(at, "at")],
            Rule::SurfaceExo { inner, outer, .. } => vec![(inner, "inner"), (outer, "outer")],
            Rule::Phago { victim, engulfer, wrap_label, .. } => {
                vec![(victim, "victim"), (engulfer, "engulfer"), (wrap_label, "wrap")]
            }
        }
    }

    /// Label of a membrane this rule brings into existence, if any.
    pub fn created_label(&self) -> Option<&str> {
        match self {
            Rule::Phago { wrap_label, .. } => Some(wrap_label),
            // pino's child inherits the parent label
            Rule::Pino { at, .. } => Some(at),
            _ => None,
        }
    }

    /// Symbols the rule consumes. Mutual and surface-pair rules consume the
    /// trigger and its dual.
    pub fn consumed_symbols(&self) -> Vec<Symbol> {
        match self {
            Rule::Evo { trigger, .. }
            | Rule::Endo { trigger, .. }
            | Rule::Exo { trigger, .. }
            | Rule::Fendo { trigger, .. }
            | Rule::Fexo { trigger, .. }
            | Rule::Pino { trigger, .. } => vec![trigger.clone()],
            Rule::MutualEndo { trigger, .. }
            | Rule::MutualExo { trigger, .. }
            | Rule::SurfaceExo { trigger, .. }
            | Rule::Phago { trigger, .. } => vec![trigger.clone(), trigger.dual()],
        }
    }

    /// Multisets appearing on the right-hand side (pino's relocated `inner`
    /// included: those objects survive the step).
    pub fn output_multisets(&self) -> Vec<&Multiset> {
        match self {
            Rule::Evo { output, .. }
            | Rule::Endo { output, .. }
            | Rule::Exo { output, .. }
            | Rule::Fendo { output, .. }
            | Rule::Fexo { output, .. } => vec![output],
            Rule::MutualEndo { mover_output, target_output, .. } => {
                vec![mover_output, target_output]
            }
            Rule::MutualExo { mover_output, host_output, .. } => vec![mover_output, host_output],
            Rule::Pino { inner, fresh, .. } => vec![inner, fresh],
            Rule::SurfaceExo { fresh, .. } => vec![fresh],
            Rule::Phago { fresh, .. } => vec![fresh],
        }
    }
}

/// Multiset in concrete `.mem` syntax: multiplicities written out.
pub fn multiset_syntax(m: &Multiset) -> String {
    let mut parts = Vec::new();
    for (obj, n) in m.iter() {
        for _ in 0..n {
            parts.push(obj.to_string());
        }
    }
    parts.join(",")
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Evo { at, trigger, output } => {
                write!(f, "evo {at}({trigger} -> {})", multiset_syntax(output))
            }
            Rule::Endo { mover, trigger, target, output } => {
                write!(f, "endo {mover}({trigger} -> {}) into {target}", multiset_syntax(output))
            }
            Rule::Exo { mover, trigger, host, output } => {
                write!(f, "exo {mover}({trigger} -> {}) from {host}", multiset_syntax(output))
            }
            Rule::Fendo { mover, target, trigger, output } => {
                write!(f, "fendo {mover} into {target}({trigger} -> {})", multiset_syntax(output))
            }
            Rule::Fexo { mover, host, trigger, output } => {
                write!(f, "fexo {mover} from {host}({trigger} -> {})", multiset_syntax(output))
            }
            Rule::MutualEndo { mover, trigger, mover_output, target, target_output } => write!(
                f,
                "mendo {mover}({trigger} -> {}) {target}({} -> {})",
                multiset_syntax(mover_output),
                trigger.dual(),
                multiset_syntax(target_output)
            ),
            Rule::MutualExo { mover, trigger, mover_output, host, host_output } => write!(
                f,
                "mexo {mover}({trigger} -> {}) {host}({} -> {})",
                multiset_syntax(mover_output),
                trigger.dual(),
                multiset_syntax(host_output)
            ),
            Rule::Pino { at, trigger, inner, fresh } => {
                if inner.is_empty() {
                    write!(f, "pino {at}({trigger} -> {})", multiset_syntax(fresh))
                } else {
                    write!(
                        f,
                        "pino {at}({trigger} : {} -> {})",
                        multiset_syntax(inner),
                        multiset_syntax(fresh)
                    )
                }
            }
            Rule::SurfaceExo { inner, trigger, outer, fresh } => {
                write!(f, "sexo {inner}({trigger} -> {}) from {outer}", multiset_syntax(fresh))
            }
            Rule::Phago { victim, trigger, engulfer, wrap_label, fresh } => write!(
                f,
                "phago {victim}({trigger}) by {engulfer} wrap {wrap_label}({})",
                multiset_syntax(fresh)
            ),
        }
    }
}

/// A parsed and validated membrane system.
#[derive(Clone, Debug)]
pub struct SystemDefinition {
    pub name: String,
    pub kind: SystemKind,
    pub alphabet: BTreeSet<Symbol>,
    pub labels: BTreeSet<String>,
    pub initial: Configuration,
    pub rules: Vec<(Rule, Span)>,
}

impl SystemDefinition {
    pub fn rule(&self, idx: usize) -> &Rule {
        &self.rules[idx].0
    }

    /// Any finite timer in the initial configuration or on a rule output?
    pub fn has_timers(&self) -> bool {
        let config_timed = self.initial.membranes().iter().any(|(_, m)| {
            m.timer.is_finite()
                || m.contents.iter().any(|(o, _)| o.timer.is_finite())
                || m.surface.iter().any(|(o, _)| o.timer.is_finite())
        });
        config_timed
            || self.rules.iter().any(|(r, _)| {
                r.output_multisets().iter().any(|m| m.iter().any(|(o, _)| o.timer.is_finite()))
            })
    }

    /// Canonical `.mem` text; parsing it back yields a congruent system.
    pub fn pretty_print(&self) -> String {
        use crate::config::Membrane;
        fn emit(m: &Membrane, depth: usize, out: &mut String) {
            let indent = "  ".repeat(depth);
            out.push_str(&indent);
            out.push_str(&m.label);
            if let crate::multiset::Timer::Finite(t) = m.timer {
                out.push_str(&format!("@{t}"));
            }
            if !m.surface.is_empty() {
                out.push('(');
                out.push_str(&multiset_syntax(&m.surface));
                out.push(')');
            }
            out.push('{');
            out.push_str(&multiset_syntax(&m.contents));
            if m.children.is_empty() {
                out.push('}');
            } else {
                out.push_str(";\n");
                for c in &m.children {
                    emit(c, depth + 1, out);
                    out.push('\n');
                }
                out.push_str(&indent);
                out.push('}');
            }
        }
        let mut out = format!("system {} {{\n  kind {}\n", self.name, self.kind);
        emit(self.initial.skin(), 1, &mut out);
        out.push_str("\n  rules {\n");
        for (rule, _) in &self.rules {
            out.push_str(&format!("    {rule}\n"));
        }
        out.push_str("  }\n}\n");
        out
    }
}
