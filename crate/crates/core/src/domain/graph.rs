//! Cycle detection over sub-supplier links.

use std::collections::BTreeMap;

use super::{Supplier, SupplierId};
use crate::error::{DpwError, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Unvisited,
    OnStack,
    Finished,
}

/// Returns a witness path `[a, b, .., a]` when the sub-supplier graph has a
/// cycle. Every referenced sub-supplier must be present in `suppliers`.
pub fn detect_cycle<'a, I>(suppliers: I) -> Result<Option<Vec<SupplierId>>>
where
    I: IntoIterator<Item = &'a Supplier>,
{
    let by_id: BTreeMap<&str, &Supplier> =
        suppliers.into_iter().map(|s| (s.id.as_str(), s)).collect();

    for s in by_id.values() {
        if let Some(link) = s
            .sub_suppliers
            .iter()
            .find(|l| !by_id.contains_key(l.supplier_id.as_str()))
        {
            return Err(DpwError::validation_with(
                format!(
                    "supplier {} references unknown sub-supplier {}",
                    s.id, link.supplier_id
                ),
                vec![link.supplier_id.to_string()],
            ));
        }
    }

    let mut marks: BTreeMap<&str, Mark> = by_id.keys().map(|&k| (k, Mark::Unvisited)).collect();

    for &start in by_id.keys() {
        if marks[start] != Mark::Unvisited {
            continue;
        }
        // iterative DFS: (node, next child index)
        let mut stack: Vec<(&str, usize)> = vec![(start, 0)];
        marks.insert(start, Mark::OnStack);
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            let links = &by_id[node].sub_suppliers;
            if *next < links.len() {
                let child = links[*next].supplier_id.as_str();
                *next += 1;
                match marks[child] {
                    Mark::Unvisited => {
                        marks.insert(child, Mark::OnStack);
                        stack.push((child, 0));
                    }
                    Mark::OnStack => {
                        let from = stack.iter().position(|(n, _)| *n == child).unwrap_or(0);
                        let mut path: Vec<SupplierId> =
                            stack[from..].iter().map(|(n, _)| SupplierId::from(*n)).collect();
                        path.push(SupplierId::from(child));
                        return Ok(Some(path));
                    }
                    Mark::Finished => {}
                }
            } else {
                marks.insert(node, Mark::Finished);
                stack.pop();
            }
        }
    }
    Ok(None)
}
