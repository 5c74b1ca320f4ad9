//! Order- and naming-insensitive comparison of integrated programs against
//! reference listings.
//!
//! Normal form:
//! * bodies are deduplicated and sorted, heads sorted;
//! * positive body atoms that are facts of the same program are dropped;
//! * rule identifiers in `lit/3` are renumbered by the sorted contents of
//!   their `lit` rules, so two listings that number rules differently agree;
//! * optionally, rules of the fixed meta program are removed, for listings
//!   that only show the instance-specific part.

use crate::program::{BodyItem, Literal, Program, Rule, Term};
use crate::transform::{meta_lines, TransformOptions, META_VOCABULARY};
use std::collections::{BTreeMap, BTreeSet};

fn canonical(head: &[Literal], body: &[BodyItem]) -> String {
    let h: BTreeSet<String> = head.iter().map(ToString::to_string).collect();
    let b: BTreeSet<String> = body.iter().map(ToString::to_string).collect();
    let h = h.into_iter().collect::<Vec<_>>().join(" v ");
    if b.is_empty() {
        format!("{h}.")
    } else {
        let b = b.into_iter().collect::<Vec<_>>().join(", ");
        if h.is_empty() {
            format!(":- {b}.")
        } else {
            format!("{h} :- {b}.")
        }
    }
}

fn rule_text(r: &Rule) -> String {
    canonical(&r.head, &r.body)
}

fn lit_id(r: &Rule) -> Option<&Term> {
    match r.head.as_slice() {
        [l] if !l.neg && l.atom.pred == "lit" && l.atom.args.len() == 3 => Some(&l.atom.args[2]),
        _ => None,
    }
}

/// Normal form of `p` as a set of rule texts.
pub fn normalize(p: &Program, drop_meta: Option<&TransformOptions>) -> BTreeSet<String> {
    let facts: BTreeSet<&Literal> = p
        .rules()
        .iter()
        .filter(|r| r.body.is_empty() && r.head.len() == 1 && !META_VOCABULARY.contains(&r.head[0].atom.pred.as_str()))
        .map(|r| &r.head[0])
        .collect();
    let meta: BTreeSet<String> = drop_meta
        .map(|o| meta_lines(o).iter().map(|(_, r)| rule_text(r)).collect())
        .unwrap_or_default();

    let mut rules: Vec<Rule> = Vec::new();
    for r in p.rules() {
        if meta.contains(&rule_text(r)) {
            continue;
        }
        let mut r = r.clone();
        if !r.body.is_empty() {
            r.body.retain(|b| !matches!(b, BodyItem::Pos(l) if facts.contains(l)));
        }
        rules.push(r);
    }

    // Renumber rule identifiers by content.
    let mut groups: BTreeMap<Term, BTreeSet<String>> = BTreeMap::new();
    for r in &rules {
        if let Some(id) = lit_id(r) {
            let mut head = r.head[0].clone();
            head.atom.args[2] = Term::sym("_");
            groups.entry(id.clone()).or_default().insert(canonical(&[head], &r.body));
        }
    }
    let mut order: Vec<(BTreeSet<String>, Term)> = groups.into_iter().map(|(id, k)| (k, id)).collect();
    order.sort();
    let renumber: BTreeMap<Term, Term> =
        order.into_iter().enumerate().map(|(i, (_, id))| (id, Term::Int(i as i64 + 1))).collect();

    rules
        .into_iter()
        .map(|mut r| {
            if let Some(id) = lit_id(&r) {
                let new = renumber[id].clone();
                r.head[0].atom.args[2] = new;
            }
            rule_text(&r)
        })
        .collect()
}

/// Rules present only on one side after normalization.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldenDiff {
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

impl GoldenDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

impl std::fmt::Display for GoldenDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for m in &self.missing {
            writeln!(f, "- {m}")?;
        }
        for e in &self.extra {
            writeln!(f, "+ {e}")?;
        }
        Ok(())
    }
}

/// `missing`: in `expected` only; `extra`: in `actual` only.
pub fn compare(actual: &Program, expected: &Program, drop_meta: Option<&TransformOptions>) -> GoldenDiff {
    let a = normalize(actual, drop_meta);
    let e = normalize(expected, drop_meta);
    GoldenDiff {
        missing: e.difference(&a).cloned().collect(),
        extra: a.difference(&e).cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    #[test]
    fn renumbering_and_guards() {
        let a = parse("g. lit(h,\"a\",1) :- g. lit(h,\"b\",2). lit(p,\"a\",2).").unwrap();
        let b = parse("g. lit(h,\"b\",7). lit(p,\"a\",7). lit(h,\"a\",3).").unwrap();
        assert!(compare(&a, &b, None).is_empty());
        let c = parse("g. lit(h,\"b\",7). lit(n,\"a\",7). lit(h,\"a\",3).").unwrap();
        let d = compare(&a, &c, None);
        assert_eq!(d.missing.len(), 1);
        assert_eq!(d.extra.len(), 1, "{d}");
    }

    #[test]
    fn body_order() {
        let a = parse("p :- q, r, q.").unwrap();
        let b = parse("p :- r, q.").unwrap();
        assert!(compare(&a, &b, None).is_empty());
    }
}
