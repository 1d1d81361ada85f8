//! Explicit deterministic cop strategies keyed by extended robber set.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::game::{expand, partition_answers, ProbeSet};
use crate::graph::Graph;
use crate::set::VertexSet;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrategyTable {
    entries: BTreeMap<VertexSet, ProbeSet>,
}

impl StrategyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, state: VertexSet, probes: ProbeSet) -> Option<ProbeSet> {
        self.entries.insert(state, probes)
    }

    pub fn get(&self, state: &VertexSet) -> Option<&ProbeSet> {
        self.entries.get(state)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexSet, &ProbeSet)> {
        self.entries.iter()
    }

    /// Number of cops: the longest probe list in the table.
    pub fn cops(&self) -> usize {
        self.entries.values().map(ProbeSet::len).max().unwrap_or(0)
    }

    /// Worst-case rounds to locate from each key under the table's own play.
    ///
    /// Keys whose play reaches an undefined state or revisits a state are
    /// absent from the result.
    pub fn depths(&self, arena: &Graph) -> BTreeMap<VertexSet, u32> {
        let mut done: BTreeMap<VertexSet, Option<u32>> = BTreeMap::new();
        for key in self.entries.keys() {
            self.depth_of(arena, key, &mut done, &mut Vec::new());
        }
        done.into_iter().filter_map(|(k, d)| d.map(|d| (k, d))).collect()
    }

    fn depth_of(
        &self,
        arena: &Graph,
        key: &VertexSet,
        done: &mut BTreeMap<VertexSet, Option<u32>>,
        path: &mut Vec<VertexSet>,
    ) -> Option<u32> {
        if let Some(d) = done.get(key) {
            return *d;
        }
        if path.contains(key) {
            return None;
        }
        let probes = self.entries.get(key)?;
        if probes.is_empty() {
            done.insert(key.clone(), None);
            return None;
        }
        path.push(key.clone());
        let mut worst = Some(1);
        for (_, part) in partition_answers(arena, key, &probes.0) {
            if part.len() > 1 {
                let child = expand(arena, &part);
                match self.depth_of(arena, &child, done, path) {
                    Some(d) => worst = worst.map(|w: u32| w.max(d + 1)),
                    None => {
                        worst = None;
                        break;
                    }
                }
            }
        }
        path.pop();
        done.insert(key.clone(), worst);
        worst
    }

    /// Probes for `x`, borrowed from the shallowest key that contains it.
    ///
    /// Refinement is monotone, so the probes of any superset key locate
    /// within that key's depth. Ties prefer smaller keys, then key order.
    pub fn covering<'a>(&'a self, x: &VertexSet, depths: &BTreeMap<VertexSet, u32>) -> Option<(&'a VertexSet, &'a ProbeSet)> {
        if depths.contains_key(x) {
            if let Some((k, p)) = self.entries.get_key_value(x) {
                return Some((k, p));
            }
        }
        self.entries
            .iter()
            .filter_map(|(k, p)| depths.get(k).map(|d| (d, k, p)))
            .filter(|(_, k, _)| x.is_subset(k))
            .min_by(|a, b| a.0.cmp(b.0).then(a.1.len().cmp(&b.1.len())).then(a.1.cmp(b.1)))
            .map(|(_, k, p)| (k, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn figure_strategy_depths() {
        let g = corpus::figure_graph();
        let v = |s| g.vertex(s).unwrap();
        let mut t = StrategyTable::new();
        t.insert(g.all_vertices(), ProbeSet(alloc::vec![v("C")]));
        t.insert(g.set_from_names(&["B", "D", "E"]).unwrap(), ProbeSet(alloc::vec![v("D")]));
        let depths = t.depths(&g);
        assert_eq!(depths.get(&g.all_vertices()), Some(&2));
        let bde = g.set_from_names(&["B", "D", "E"]).unwrap();
        assert_eq!(depths.get(&bde), Some(&1));

        let de = g.set_from_names(&["D", "E"]).unwrap();
        let (key, probes) = t.covering(&de, &depths).unwrap();
        assert_eq!(key, &bde);
        assert_eq!(probes.0, alloc::vec![v("D")]);
    }

    #[test]
    fn cyclic_play_has_no_depth() {
        let g = corpus::complete(3);
        let mut t = StrategyTable::new();
        t.insert(g.all_vertices(), ProbeSet(alloc::vec![0]));
        assert!(t.depths(&g).is_empty());
    }
}
