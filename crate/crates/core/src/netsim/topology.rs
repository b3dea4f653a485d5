use rand::Rng;

use crate::NodeId;

/// Static node placement with unit-disk adjacency.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    positions: Vec<(f64, f64)>,
    field: (f64, f64),
    radio_range: f64,
    adjacency: Vec<Vec<NodeId>>,
}

/// Place `node_count` nodes uniformly over `field` and connect every pair
/// within `radio_range`.
pub fn build_topology<R: Rng + ?Sized>(
    node_count: usize,
    field: (f64, f64),
    radio_range: f64,
    rng: &mut R,
) -> Topology {
    assert!(node_count >= 1, "need at least one node");
    let positions = (0..node_count)
        .map(|_| (rng.gen::<f64>() * field.0, rng.gen::<f64>() * field.1))
        .collect();
    Topology::from_positions(positions, field, radio_range)
}

impl Topology {
    /// Adjacency is found by bucketing nodes into square cells one radio
    /// range wide and comparing only nodes in neighboring cells.
    pub fn from_positions(positions: Vec<(f64, f64)>, field: (f64, f64), radio_range: f64) -> Self {
        assert!(radio_range >= 0.0, "radio range must be nonnegative");
        let n = positions.len();
        let cell = if radio_range > 0.0 { radio_range } else { f64::INFINITY };
        let cols = ((field.0 / cell).floor() as usize).saturating_add(1);
        let rows = ((field.1 / cell).floor() as usize).saturating_add(1);
        let cell_of = |(x, y): (f64, f64)| {
            let c = ((x / cell).floor().max(0.0) as usize).min(cols - 1);
            let r = ((y / cell).floor().max(0.0) as usize).min(rows - 1);
            (c, r)
        };

        let mut grid: Vec<Vec<NodeId>> = vec![Vec::new(); cols * rows];
        for (i, &p) in positions.iter().enumerate() {
            let (c, r) = cell_of(p);
            grid[r * cols + c].push(i);
        }

        let range_sq = radio_range * radio_range;
        let mut adjacency = vec![Vec::new(); n];
        for (i, &p) in positions.iter().enumerate() {
            let (c, r) = cell_of(p);
            for rr in r.saturating_sub(1)..=(r + 1).min(rows - 1) {
                for cc in c.saturating_sub(1)..=(c + 1).min(cols - 1) {
                    for &j in &grid[rr * cols + cc] {
                        if j == i {
                            continue;
                        }
                        let q = positions[j];
                        let (dx, dy) = (p.0 - q.0, p.1 - q.1);
                        if dx * dx + dy * dy <= range_sq {
                            adjacency[i].push(j);
                        }
                    }
                }
            }
            adjacency[i].sort_unstable();
        }

        Topology {
            positions,
            field,
            radio_range,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }

    pub fn field(&self) -> (f64, f64) {
        self.field
    }

    pub fn radio_range(&self) -> f64 {
        self.radio_range
    }

    /// Neighbors of `node` in ascending id order.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn hop_distances(&self, source: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = std::collections::VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Give every item exactly one origin node, uniformly at random.
pub fn assign_origins<R: Rng + ?Sized>(n_items: usize, node_count: usize, rng: &mut R) -> Vec<NodeId> {
    assert!(n_items >= 1 && node_count >= 1);
    (0..n_items).map(|_| rng.gen_range(0..node_count)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn range_beyond_diagonal_is_complete() {
        let t = build_topology(12, (500.0, 500.0), 707.2, &mut seed::rng(3, 0, 0));
        assert_eq!(t.edge_count(), 12 * 11 / 2);
    }

    #[test]
    fn zero_range_has_no_edges() {
        let t = build_topology(12, (500.0, 500.0), 0.0, &mut seed::rng(3, 0, 0));
        assert_eq!(t.edge_count(), 0);
    }

    #[test]
    fn adjacency_is_symmetric_and_irreflexive() {
        let t = build_topology(40, (500.0, 500.0), 120.0, &mut seed::rng(9, 0, 0));
        for u in 0..t.node_count() {
            assert!(!t.neighbors(u).contains(&u));
            for &v in t.neighbors(u) {
                assert!(t.neighbors(v).contains(&u));
            }
        }
    }

    #[test]
    fn boundary_distance_counts_as_adjacent() {
        let t = Topology::from_positions(vec![(0.0, 0.0), (3.0, 4.0), (10.0, 0.0)], (20.0, 20.0), 5.0);
        assert_eq!(t.neighbors(0), &[1]);
        assert_eq!(t.neighbors(2), &[] as &[usize]);
    }

    #[test]
    fn hop_distances_on_a_line() {
        let t = Topology::from_positions(vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], (3.0, 1.0), 1.0);
        assert_eq!(t.hop_distances(0), vec![Some(0), Some(1), Some(2)]);
        assert!(t.is_connected());
    }

    #[test]
    fn single_node_origins() {
        let o = assign_origins(20, 1, &mut seed::rng(1, 0, 0));
        assert!(o.iter().all(|&n| n == 0));
    }

    #[test]
    fn every_item_has_one_origin() {
        let o = assign_origins(100, 10, &mut seed::rng(1, 0, 0));
        assert_eq!(o.len(), 100);
        assert!(o.iter().all(|&n| n < 10));
    }
}
