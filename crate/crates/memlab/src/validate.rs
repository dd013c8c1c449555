//! System validation: kind consistency, label and alphabet checks.

use std::collections::BTreeSet;

use crate::config::{Configuration, Membrane};
use crate::parser::{self, Diagnostic, RawMembrane, RawSystem, Severity};
use crate::rules::{Rule, Span, SystemDefinition, SystemKind};
use crate::multiset::Symbol;

fn convert(m: &RawMembrane) -> Membrane {
    Membrane {
        label: m.label.clone(),
        timer: m.timer,
        contents: m.contents.clone(),
        surface: m.surface.clone(),
        children: m.children.iter().map(convert).collect(),
    }
}

fn collect_labels(m: &RawMembrane, out: &mut BTreeSet<String>) {
    out.insert(m.label.clone());
    for c in &m.children {
        collect_labels(c, out);
    }
}

fn collect_symbols(m: &RawMembrane, out: &mut BTreeSet<Symbol>) {
    for (obj, _) in m.contents.iter().chain(m.surface.iter()) {
        out.insert(obj.symbol.clone());
    }
    for c in &m.children {
        collect_symbols(c, out);
    }
}

/// Checks all system invariants. Errors make the system unusable; notes are
/// advisory. The returned definition is `Some` iff there are no errors.
pub fn validate(raw: &RawSystem) -> (Option<SystemDefinition>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let kind = raw.kind.unwrap_or(SystemKind::Plain);

    // Kind consistency of the initial tree: objects live inside membranes in
    // plain systems and on membranes in surface systems.
    fn check_tree(m: &RawMembrane, kind: SystemKind, diags: &mut Vec<Diagnostic>) {
        match kind {
            SystemKind::Plain if !m.surface.is_empty() => diags.push(Diagnostic::error(
                format!("membrane `{}` carries surface objects in a plain system", m.label),
                m.span,
            )),
            SystemKind::Surface if !m.contents.is_empty() => diags.push(Diagnostic::error(
                format!(
                    "membrane `{}` holds interior objects in a surface system",
                    m.label
                ),
                m.span,
            )),
            _ => {}
        }
        for c in &m.children {
            check_tree(c, kind, diags);
        }
    }
    check_tree(&raw.skin, kind, &mut diags);

    // Declared labels: everything in the initial tree plus labels brought
    // into existence by phago wrap clauses.
    let mut labels = BTreeSet::new();
    collect_labels(&raw.skin, &mut labels);
    for (rule, _) in &raw.rules {
        if let Rule::Phago { wrap_label, .. } = rule {
            labels.insert(wrap_label.clone());
        }
    }

    // Alphabet: symbols in the initial tree and on rule right-hand sides,
    // closed under duals.
    let mut alphabet = BTreeSet::new();
    collect_symbols(&raw.skin, &mut alphabet);
    for (rule, _) in &raw.rules {
        for m in rule.output_multisets() {
            for (obj, _) in m.iter() {
                alphabet.insert(obj.symbol.clone());
            }
        }
    }
    let duals: Vec<Symbol> = alphabet.iter().map(|s| s.dual()).collect();
    alphabet.extend(duals);

    let skin_label = raw.skin.label.clone();
    let mut saw_evo = None;
    let mut saw_mutual = false;
    for (rule, span) in &raw.rules {
        if rule.is_surface_family() != (kind == SystemKind::Surface) {
            diags.push(Diagnostic::error(
                format!(
                    "`{}` rules are not allowed in a {kind} system",
                    rule.keyword()
                ),
                *span,
            ));
        }
        for (label, role) in rule.label_refs() {
            if !labels.contains(label) {
                diags.push(Diagnostic::error(
                    format!("undeclared label `{label}` ({role})"),
                    *span,
                ));
            }
        }
        for sym in rule.consumed_symbols() {
            if !alphabet.contains(&sym) {
                diags.push(Diagnostic::error(
                    format!(
                        "rule consumes `{sym}`, which occurs neither in the initial \
                         configuration nor on any rule right-hand side"
                    ),
                    *span,
                ));
            }
        }
        match rule {
            Rule::Evo { .. } => saw_evo = Some(*span),
            Rule::MutualEndo { .. } | Rule::MutualExo { .. } => saw_mutual = true,
            _ => {}
        }
        let exit_host = match rule {
            Rule::Exo { host, .. }
            | Rule::Fexo { host, .. }
            | Rule::MutualExo { host, .. } => Some(host),
            Rule::SurfaceExo { outer, .. } => Some(outer),
            _ => None,
        };
        if exit_host == Some(&skin_label) {
            diags.push(Diagnostic::note(
                format!(
                    "host label `{skin_label}` is the skin label; nothing is ever \
                     expelled past the skin"
                ),
                *span,
            ));
        }
    }
    if let (Some(span), true) = (saw_evo, saw_mutual) {
        diags.push(Diagnostic::note(
            "system mixes contextual evolution with mutual mobility rules".to_string(),
            span,
        ));
    }

    if diags.iter().any(|d| d.severity == Severity::Error) {
        return (None, diags);
    }
    let system = SystemDefinition {
        name: raw.name.clone(),
        kind,
        alphabet,
        labels,
        initial: Configuration::new(convert(&raw.skin)),
        rules: raw.rules.clone(),
    };
    (Some(system), diags)
}

/// Parses and validates `.mem` source in one go.
pub fn parse_system(text: &str) -> Result<SystemDefinition, Vec<Diagnostic>> {
    match parser::parse(text) {
        Err(d) => Err(vec![d]),
        Ok(raw) => {
            let (sys, diags) = validate(&raw);
            match sys {
                Some(s) => Ok(s),
                None => Err(diags),
            }
        }
    }
}

/// Diagnostics for already-parsed source; parse errors come back as a
/// single-entry list.
pub fn diagnostics(text: &str) -> Vec<Diagnostic> {
    match parser::parse(text) {
        Err(d) => vec![d],
        Ok(raw) => validate(&raw).1,
    }
}
