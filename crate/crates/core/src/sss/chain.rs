//! Aggregation of per-supplier scores along sub-supplier links.

use std::collections::{BTreeMap, BTreeSet};

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{BreakdownEntry, SustainabilityScore};
use crate::domain::{SubSupplierLink, SupplierId};
use crate::error::{DpwError, Result};

/// Sub-supplier adjacency: parent → links to children.
pub type SupplyGraph = BTreeMap<SupplierId, Vec<SubSupplierLink>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainEntry {
    /// Supplier ids from the root to this node, inclusive.
    pub path: Vec<SupplierId>,
    /// Product of `quantityPerUnit` along the path.
    pub multiplier: Decimal,
    pub own_score: Option<Decimal>,
    pub contribution: Decimal,
    pub gap: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainAggregate {
    pub root: SupplierId,
    pub total: Decimal,
    /// False when some node on some path had no score.
    pub complete: bool,
    pub entries: Vec<ChainEntry>,
}

fn check_acyclic(root: &SupplierId, graph: &SupplyGraph) -> Result<()> {
    fn visit<'a>(
        node: &'a SupplierId,
        graph: &'a SupplyGraph,
        on_path: &mut Vec<&'a SupplierId>,
        done: &mut BTreeSet<&'a SupplierId>,
    ) -> Result<()> {
        if done.contains(node) {
            return Ok(());
        }
        if let Some(pos) = on_path.iter().position(|n| *n == node) {
            let cycle: Vec<String> = on_path[pos..]
                .iter()
                .chain(std::iter::once(&node))
                .map(|s| s.to_string())
                .collect();
            return Err(DpwError::validation_with(
                format!("sub-supplier cycle: {}", cycle.join(" -> ")),
                cycle,
            ));
        }
        on_path.push(node);
        for link in graph.get(node).into_iter().flatten() {
            visit(&link.supplier_id, graph, on_path, done)?;
        }
        on_path.pop();
        done.insert(node);
        Ok(())
    }
    visit(root, graph, &mut Vec::new(), &mut BTreeSet::new())
}

/// `total(n) = own(n) + Σ quantityPerUnit × total(child)`.
///
/// Nodes missing from `node_scores` contribute nothing and are reported as
/// gap entries; their own sub-suppliers are still aggregated.
pub fn aggregate_chain(
    root: &SupplierId,
    graph: &SupplyGraph,
    node_scores: &BTreeMap<SupplierId, Decimal>,
) -> Result<ChainAggregate> {
    check_acyclic(root, graph)?;

    let mut memo: BTreeMap<&SupplierId, Decimal> = BTreeMap::new();
    let total = subtree_total(root, graph, node_scores, &mut memo);

    let mut entries = Vec::new();
    let mut stack = vec![(vec![root.clone()], Decimal::ONE)];
    while let Some((path, multiplier)) = stack.pop() {
        let node = path.last().expect("path is never empty");
        let own = node_scores.get(node).copied();
        entries.push(ChainEntry {
            contribution: own.map_or(Decimal::ZERO, |v| v * multiplier),
            own_score: own,
            gap: own.is_none(),
            multiplier,
            path: path.clone(),
        });
        for link in graph.get(node).into_iter().flatten().rev() {
            let mut child_path = path.clone();
            child_path.push(link.supplier_id.clone());
            stack.push((child_path, multiplier * link.quantity_per_unit));
        }
    }

    Ok(ChainAggregate {
        root: root.clone(),
        total,
        complete: entries.iter().all(|e| !e.gap),
        entries,
    })
}

fn subtree_total<'a>(
    node: &'a SupplierId,
    graph: &'a SupplyGraph,
    node_scores: &BTreeMap<SupplierId, Decimal>,
    memo: &mut BTreeMap<&'a SupplierId, Decimal>,
) -> Decimal {
    if let Some(v) = memo.get(node) {
        return *v;
    }
    let own = node_scores.get(node).copied().unwrap_or(Decimal::ZERO);
    let children: Decimal = graph
        .get(node)
        .into_iter()
        .flatten()
        .map(|link| link.quantity_per_unit * subtree_total(&link.supplier_id, graph, node_scores, memo))
        .sum();
    let total = own + children;
    memo.insert(node, total);
    total
}

/// Extends a root score with its supply chain: the value becomes the chain
/// total and every descendant path is appended to the breakdown.
pub fn with_chain(mut root_score: SustainabilityScore, chain: &ChainAggregate) -> SustainabilityScore {
    root_score.value_tco2e += chain
        .entries
        .iter()
        .filter(|e| e.path.len() > 1)
        .map(|e| e.contribution)
        .sum::<Decimal>();
    root_score.breakdown.extend(chain.entries.iter().filter(|e| e.path.len() > 1).map(|e| {
        BreakdownEntry {
            component_label: format!("chain:{}", e.path.last().expect("non-empty path")),
            stage_used: None,
            contribution: e.contribution,
            path: e.path.clone(),
            gap: e.gap,
        }
    }));
    root_score
}

#[cfg(test)]
mod tests {
    use super::*;
    use rust_decimal_macros::dec;

    fn link(child: &str, q: Decimal) -> SubSupplierLink {
        SubSupplierLink {
            supplier_id: child.into(),
            material_id: "m".into(),
            quantity_per_unit: q,
        }
    }

    fn scores(pairs: &[(&str, Decimal)]) -> BTreeMap<SupplierId, Decimal> {
        pairs.iter().map(|(k, v)| (SupplierId::from(*k), *v)).collect()
    }

    #[test]
    fn leaf_is_own_score() {
        let agg = aggregate_chain(&"a".into(), &SupplyGraph::new(), &scores(&[("a", dec!(5))])).unwrap();
        assert_eq!(agg.total, dec!(5));
        assert!(agg.complete);
        assert_eq!(agg.entries.len(), 1);
    }

    #[test]
    fn one_child_scaled_by_quantity() {
        let graph = SupplyGraph::from([("a".into(), vec![link("b", dec!(3))])]);
        let agg = aggregate_chain(&"a".into(), &graph, &scores(&[("a", dec!(5)), ("b", dec!(2))])).unwrap();
        assert_eq!(agg.total, dec!(11));
        assert_eq!(agg.entries[1].path, vec![SupplierId::from("a"), "b".into()]);
        assert_eq!(agg.entries[1].contribution, dec!(6));
    }

    #[test]
    fn missing_child_is_a_gap_but_grandchildren_count() {
        let graph = SupplyGraph::from([
            ("a".into(), vec![link("b", dec!(2))]),
            ("b".into(), vec![link("c", dec!(4))]),
        ]);
        let agg = aggregate_chain(&"a".into(), &graph, &scores(&[("a", dec!(1)), ("c", dec!(1))])).unwrap();
        assert!(!agg.complete);
        assert!(agg.entries.iter().any(|e| e.gap && e.path.last().unwrap().as_str() == "b"));
        assert_eq!(agg.total, dec!(9));
    }

    #[test]
    fn cycle_rejected() {
        let graph = SupplyGraph::from([
            ("a".into(), vec![link("b", dec!(1))]),
            ("b".into(), vec![link("a", dec!(1))]),
        ]);
        let err = aggregate_chain(&"a".into(), &graph, &BTreeMap::new()).unwrap_err();
        assert!(err.to_string().contains("a -> b -> a"));
    }

    #[test]
    fn diamond_counts_both_paths() {
        let graph = SupplyGraph::from([
            ("a".into(), vec![link("b", dec!(1)), link("c", dec!(2))]),
            ("b".into(), vec![link("d", dec!(1))]),
            ("c".into(), vec![link("d", dec!(1))]),
        ]);
        let agg = aggregate_chain(&"a".into(), &graph, &scores(&[("d", dec!(10))])).unwrap();
        assert_eq!(agg.total, dec!(30));
        let sum: Decimal = agg.entries.iter().map(|e| e.contribution).sum();
        assert_eq!(sum, agg.total);
    }
}
