//! Minimal directed spanning trees under the "South" order and on-line
//! nearest-neighbour graphs, with the weight, degree and record functionals
//! built on them and the boundary coupling between the two.
//!
//! Both graphs join each point to its nearest neighbour among the points that
//! precede it: in ascending last-coordinate order for the tree, in arrival
//! order for the on-line graph. Ties go to the lowest point index.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist2, project_drop_last_with_order, PointSet, Region};
use crate::grid::PrefixGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Quadratic scan over all admissible targets.
    Brute,
    /// Incremental uniform grid.
    Indexed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphKind {
    Mdst,
    Ong,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub source: usize,
    pub target: usize,
    pub length: f64,
}

/// Edges are kept sorted by source index; every vertex has at most one
/// outgoing edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedGraph {
    pub kind: GraphKind,
    pub num_vertices: usize,
    pub edges: Vec<DirectedEdge>,
}

impl DirectedGraph {
    fn from_targets(kind: GraphKind, targets: Vec<Option<(usize, f64)>>) -> Self {
        let num_vertices = targets.len();
        let edges = targets
            .into_iter()
            .enumerate()
            .filter_map(|(source, t)| {
                t.map(|(target, d2)| DirectedEdge {
                    source,
                    target,
                    length: d2.sqrt(),
                })
            })
            .collect();
        DirectedGraph {
            kind,
            num_vertices,
            edges,
        }
    }

    /// The outgoing edge of `source`, if any.
    pub fn edge_from(&self, source: usize) -> Option<&DirectedEdge> {
        self.edges
            .binary_search_by_key(&source, |e| e.source)
            .ok()
            .map(|i| &self.edges[i])
    }

    /// Ignoring direction, the edges form a spanning tree (`n - 1` edges, no
    /// cycle). Empty graphs count as trees.
    pub fn is_spanning_tree(&self) -> bool {
        let n = self.num_vertices;
        if n == 0 {
            return self.edges.is_empty();
        }
        if self.edges.len() != n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "source,target,length")?;
        for e in &self.edges {
            writeln!(out, "{},{},{}", e.source, e.target, e.length)?;
        }
        Ok(())
    }

    /// Reads the edge rows written by [`DirectedGraph::write_csv`].
    pub fn read_csv<R: BufRead>(input: R, kind: GraphKind, num_vertices: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if i == 0 {
                if line.trim() != "source,target,length" {
                    return Err(Error::Parse {
                        line: 1,
                        reason: "unexpected header".into(),
                    });
                }
                continue;
            }
            let bad = |reason: &str| Error::Parse {
                line: i + 1,
                reason: reason.to_string(),
            };
            let mut fields = line.trim().split(',');
            let mut field = || fields.next().ok_or_else(|| bad("missing field"));
            let source = field()?.parse().map_err(|_| bad("bad source"))?;
            let target = field()?.parse().map_err(|_| bad("bad target"))?;
            let length = field()?.parse().map_err(|_| bad("bad length"))?;
            edges.push(DirectedEdge { source, target, length });
        }
        edges.sort_by_key(|e| e.source);
        Ok(DirectedGraph {
            kind,
            num_vertices,
            edges,
        })
    }
}

fn nearest_with_grid(points: &PointSet, order: &[usize]) -> Vec<Option<(usize, f64)>> {
    let mut grid = PrefixGrid::new(points, order);
    let mut targets = vec![None; points.len()];
    for (rank, &i) in order.iter().enumerate() {
        targets[i] = grid.nearest_before(rank, points.get(i)).map(|nb| (nb.point, nb.dist2));
    }
    targets
}

fn argmin_over<I: Iterator<Item = usize>>(points: &PointSet, query: usize, candidates: I) -> Option<(usize, f64)> {
    let q = points.get(query);
    let mut best: Option<(usize, f64)> = None;
    // candidates arrive in increasing index, so strict `<` keeps the lowest index on ties
    for j in candidates {
        let d2 = dist2(q, points.get(j));
        if best.is_none_or(|(_, b)| d2 < b) {
            best = Some((j, d2));
        }
    }
    best
}

/// Minimal directed spanning tree: each point except the sink (lowest last
/// coordinate) joins its nearest point among those strictly below it.
pub fn build_mdst(points: &PointSet, strategy: Strategy) -> Result<DirectedGraph> {
    if let Some((first, second)) = points.find_duplicate_last() {
        return Err(Error::DuplicateLastCoordinate {
            first: first.min(second),
            second: first.max(second),
            value: points.last_coord(first),
        });
    }
    let targets = match strategy {
        Strategy::Indexed => nearest_with_grid(points, &points.ascending_last_order()),
        Strategy::Brute => (0..points.len())
            .map(|i| {
                let h = points.last_coord(i);
                argmin_over(points, i, (0..points.len()).filter(|&j| points.last_coord(j) < h))
            })
            .collect(),
    };
    Ok(DirectedGraph::from_targets(GraphKind::Mdst, targets))
}

/// On-line nearest-neighbour graph on an arrival sequence.
pub fn build_ong(sequence: &PointSet) -> DirectedGraph {
    build_ong_with(sequence, Strategy::Indexed)
}

pub fn build_ong_with(sequence: &PointSet, strategy: Strategy) -> DirectedGraph {
    let targets = match strategy {
        Strategy::Indexed => {
            let order: Vec<usize> = (0..sequence.len()).collect();
            nearest_with_grid(sequence, &order)
        }
        Strategy::Brute => (0..sequence.len()).map(|i| argmin_over(sequence, i, 0..i)).collect(),
    };
    DirectedGraph::from_targets(GraphKind::Ong, targets)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::param("alpha", alpha, "must be positive and finite"))
    }
}

#[inline]
fn power(length: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        length
    } else if alpha == 2.0 {
        length * length
    } else {
        length.powf(alpha)
    }
}

/// Sum of `length^alpha` over edges whose source lies in `region` (all edges
/// when `region` is `None`).
pub fn total_weight(graph: &DirectedGraph, alpha: f64, points: &PointSet, region: Option<&Region>) -> Result<f64> {
    check_alpha(alpha)?;
    if graph.num_vertices != points.len() {
        return Err(Error::InvalidInput(format!(
            "graph has {} vertices but the point set has {}",
            graph.num_vertices,
            points.len()
        )));
    }
    if let Some(r) = region {
        if r.dim() != points.dim() {
            return Err(Error::InvalidDimension {
                got: r.dim(),
                reason: "region dimension differs from the points",
            });
        }
    }
    Ok(graph
        .edges
        .iter()
        .filter(|e| region.is_none_or(|r| r.contains(points.get(e.source))))
        .map(|e| power(e.length, alpha))
        .sum())
}

/// Longest edge; 0 for an edgeless graph.
pub fn max_edge_length(graph: &DirectedGraph) -> f64 {
    graph.edges.iter().map(|e| e.length).fold(0.0, f64::max)
}

pub fn in_degrees(graph: &DirectedGraph) -> Vec<usize> {
    let mut deg = vec![0; graph.num_vertices];
    for e in &graph.edges {
        deg[e.target] += 1;
    }
    deg
}

/// Running maximum of edge length by source index: entry `m` is the longest
/// edge of the on-line graph on the first `m + 1` arrivals.
pub fn ong_running_max(graph: &DirectedGraph) -> Vec<f64> {
    let mut out = vec![0.0; graph.num_vertices];
    let mut current = 0.0f64;
    let mut edges = graph.edges.iter().peekable();
    for (i, slot) in out.iter_mut().enumerate() {
        while let Some(e) = edges.next_if(|e| e.source == i) {
            current = current.max(e.length);
        }
        *slot = current;
    }
    out
}

/// Upper records: positions whose value exceeds every earlier value. The
/// first entry is always a record.
pub fn upper_records(values: &[f64]) -> Vec<(usize, f64)> {
    let mut records = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if i == 0 || v > best {
            records.push((i, v));
            best = v;
        }
    }
    records
}

/// Longest edge of the 1-d on-line graph on `(0, values...)`, computed as the
/// largest gap between consecutive upper records (starting from 0).
pub fn ong_max_1d_via_records(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut previous = 0.0;
    let mut longest = 0.0f64;
    for (_, v) in upper_records(values) {
        longest = longest.max(v - previous);
        previous = v;
    }
    Ok(longest)
}

/// The points in the base slab `x_d <= height` and their projections.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCoupling {
    /// Slab points in ascending last-coordinate order.
    pub boundary: PointSet,
    /// `boundary` with the last coordinate dropped, same order.
    pub projected: PointSet,
    pub height: f64,
}

impl BoundaryCoupling {
    pub fn beta(&self) -> usize {
        self.boundary.len()
    }
}

pub fn extract_boundary_coupling(points: &PointSet, height: f64) -> Result<BoundaryCoupling> {
    let d = points.dim();
    if d < 2 {
        return Err(Error::InvalidDimension {
            got: d,
            reason: "boundary coupling needs dimension at least 2",
        });
    }
    if height.is_nan() || height <= 0.0 {
        return Err(Error::param("height", height, "must be positive"));
    }
    let (projected_all, order) = project_drop_last_with_order(points)?;
    let beta = order.iter().take_while(|&&i| points.last_coord(i) <= height).count();
    let boundary = points.permuted(&order[..beta]);
    let projected = PointSet::from_flat(d - 1, projected_all.as_flat()[..beta * (d - 1)].to_vec())?;
    Ok(BoundaryCoupling {
        boundary,
        projected,
        height,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    /// Power-weighted length of the on-line graph on the projected sequence.
    pub ong_weight: f64,
    /// Power-weighted length of the directed tree on the slab points.
    pub mdst_weight: f64,
    /// `ong_weight <= mdst_weight`.
    pub ordering_holds: bool,
    /// Edges where the tree edge weight exceeds the paired on-line edge weight
    /// by more than `bound_constant * (height difference)`. Only checked for
    /// `alpha >= 1`.
    pub per_edge_violations: usize,
    /// Largest `tree weight - online weight - bound` over edges (`alpha >= 1`).
    pub max_per_edge_excess: Option<f64>,
    /// `alpha ((d-1)^{1/2} + 1)^{alpha - 1}`.
    pub bound_constant: f64,
    /// Sum over edges of `bound_constant * (height difference)`; an upper bound
    /// on `mdst_weight - ong_weight` when `alpha >= 1`.
    pub aggregate_bound: f64,
    pub beta_n: usize,
}

const PER_EDGE_SLACK: f64 = 1e-12;

/// Compares the directed tree on the slab points with the on-line graph on
/// their projections, edge by edge.
pub fn verify_coupling_bounds(boundary: &PointSet, projected: &PointSet, alpha: f64) -> Result<CouplingReport> {
    check_alpha(alpha)?;
    let d = boundary.dim();
    if d < 2 {
        return Err(Error::InvalidDimension {
            got: d,
            reason: "boundary coupling needs dimension at least 2",
        });
    }
    if boundary.len() != projected.len() {
        return Err(Error::InvalidInput(format!(
            "{} slab points but {} projected points",
            boundary.len(),
            projected.len()
        )));
    }
    if projected.dim() != d - 1 {
        return Err(Error::InvalidDimension {
            got: projected.dim(),
            reason: "projected sequence must have one dimension fewer than the slab points",
        });
    }
    let order = boundary.ascending_last_order();
    for (rank, &i) in order.iter().enumerate() {
        if boundary.get(i)[..d - 1] != *projected.get(rank) {
            return Err(Error::InvalidInput(format!(
                "projected point {rank} is not the projection of the slab point of that height rank"
            )));
        }
    }
    let tree = build_mdst(boundary, Strategy::Indexed)?;
    let ong = build_ong(projected);
    let bound_constant = alpha * (((d - 1) as f64).sqrt() + 1.0).powf(alpha - 1.0);

    let mut mdst_weight = 0.0;
    let mut ong_weight = 0.0;
    let mut violations = 0;
    let mut max_excess: Option<f64> = None;
    let mut aggregate_bound = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        let (Some(t), Some(o)) = (tree.edge_from(i), ong.edge_from(rank)) else {
            continue;
        };
        let tw = power(t.length, alpha);
        let ow = power(o.length, alpha);
        mdst_weight += tw;
        ong_weight += ow;
        let rise = boundary.last_coord(i) - boundary.last_coord(order[o.target]);
        let bound = bound_constant * rise;
        aggregate_bound += bound;
        if alpha >= 1.0 {
            let excess = tw - ow - bound;
            max_excess = Some(max_excess.map_or(excess, |m| m.max(excess)));
            if excess > PER_EDGE_SLACK {
                violations += 1;
            }
        }
    }
    Ok(CouplingReport {
        ong_weight,
        mdst_weight,
        ordering_holds: ong_weight <= mdst_weight,
        per_edge_violations: violations,
        max_per_edge_excess: max_excess,
        bound_constant,
        aggregate_bound,
        beta_n: boundary.len(),
    })
}

/// Number of height ranks `j` at which the tree in-degree of the rank-`j`
/// point exceeds the in-degree of its projection in the on-line graph on the
/// projected suffix starting at `j`. Quadratic in the number of points.
pub fn degree_domination_violations(points: &PointSet) -> Result<usize> {
    let n = points.len();
    let tree = build_mdst(points, Strategy::Indexed)?;
    let tree_deg = in_degrees(&tree);
    let (proj, order) = project_drop_last_with_order(points)?;
    // suffix_deg[j] = #{k > j : proj[k] is at least as close to proj[j] as to any proj[i], j < i < k}
    let mut suffix_deg = vec![0usize; n];
    for k in 1..n {
        let q = proj.get(k);
        let mut nearest_between = f64::INFINITY;
        for j in (0..k).rev() {
            let d2 = dist2(q, proj.get(j));
            if d2 <= nearest_between {
                suffix_deg[j] += 1;
            }
            nearest_between = nearest_between.min(d2);
        }
    }
    Ok((0..n).filter(|&j| tree_deg[order[j]] > suffix_deg[j]).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_binomial_cloud;

    fn set(dim: usize, rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(dim, rows).unwrap()
    }

    #[test]
    fn two_point_tree() {
        let p = set(2, &[&[0.3, 0.8], &[0.6, 0.4]]);
        for s in [Strategy::Brute, Strategy::Indexed] {
            let g = build_mdst(&p, s).unwrap();
            assert_eq!(g.edges.len(), 1);
            let e = g.edges[0];
            assert_eq!((e.source, e.target), (0, 1));
            assert!((e.length - 0.5).abs() < 1e-15);
            assert_eq!(in_degrees(&g), vec![0, 1]);
        }
    }

    #[test]
    fn three_point_tree() {
        let p = set(2, &[&[0.5, 0.1], &[0.2, 0.5], &[0.9, 0.6]]);
        let g = build_mdst(&p, Strategy::Indexed).unwrap();
        assert_eq!(g, build_mdst(&p, Strategy::Brute).unwrap());
        assert_eq!(g.edges.len(), 2);
        assert_eq!((g.edges[0].source, g.edges[0].target), (1, 0));
        assert!((g.edges[0].length - 0.5).abs() < 1e-12);
        // (0.9,0.6): 0.41 to the sink beats 0.5 to (0.2,0.5)
        assert_eq!((g.edges[1].source, g.edges[1].target), (2, 0));
        assert!((g.edges[1].length - 0.41f64.sqrt()).abs() < 1e-12);
        assert!((max_edge_length(&g) - 0.41f64.sqrt()).abs() < 1e-12);

        let lower_half = Region::slab(2, 0.0, 0.5).unwrap();
        let w = total_weight(&g, 1.0, &p, Some(&lower_half)).unwrap();
        assert!((w - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_and_singleton() {
        let empty = PointSet::new(2).unwrap();
        let g = build_mdst(&empty, Strategy::Indexed).unwrap();
        assert_eq!((g.num_vertices, g.edges.len()), (0, 0));
        assert_eq!(total_weight(&g, 1.0, &empty, None).unwrap(), 0.0);
        assert_eq!(max_edge_length(&g), 0.0);
        let one = set(2, &[&[0.4, 0.4]]);
        let g = build_mdst(&one, Strategy::Brute).unwrap();
        assert_eq!((g.num_vertices, g.edges.len()), (1, 0));
        assert!(build_ong(&empty).edges.is_empty());
        assert!(build_ong(&one).edges.is_empty());
    }

    #[test]
    fn duplicate_heights_rejected() {
        let p = set(2, &[&[0.1, 0.5], &[0.7, 0.5]]);
        assert!(matches!(
            build_mdst(&p, Strategy::Indexed),
            Err(Error::DuplicateLastCoordinate {
                first: 0,
                second: 1,
                ..
            })
        ));
    }

    #[test]
    fn ong_one_dimensional_example() {
        let seq = set(1, &[&[0.5], &[0.1], &[0.4]]);
        let g = build_ong(&seq);
        assert_eq!(g, build_ong_with(&seq, Strategy::Brute));
        assert_eq!((g.edges[0].source, g.edges[0].target), (1, 0));
        assert!((g.edges[0].length - 0.4).abs() < 1e-15);
        assert_eq!((g.edges[1].source, g.edges[1].target), (2, 0));
        assert!((g.edges[1].length - 0.1).abs() < 1e-15);
    }

    #[test]
    fn star_ong_in_degree() {
        let mut rows: Vec<Vec<f64>> = vec![vec![0.0, 0.0]];
        // each newcomer is over twice as close to the centre as to earlier points
        for i in 0..10 {
            let (a, r) = (i as f64 * 2.0, 0.25f64.powi(i));
            rows.push(vec![r * a.cos(), r * a.sin()]);
        }
        let g = build_ong(&PointSet::from_rows(2, &rows).unwrap());
        assert_eq!(in_degrees(&g)[0], 10);
    }

    #[test]
    fn weights_and_alpha_errors() {
        let p = set(1, &[&[0.0], &[0.3], &[0.7]]);
        let g = DirectedGraph {
            kind: GraphKind::Ong,
            num_vertices: 3,
            edges: vec![
                DirectedEdge {
                    source: 1,
                    target: 0,
                    length: 0.3,
                },
                DirectedEdge {
                    source: 2,
                    target: 1,
                    length: 0.4,
                },
            ],
        };
        assert!((total_weight(&g, 1.0, &p, None).unwrap() - 0.7).abs() < 1e-15);
        assert!((total_weight(&g, 2.0, &p, None).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(max_edge_length(&g), 0.4);
        assert!(total_weight(&g, 0.0, &p, None).is_err());
        assert!(total_weight(&g, -1.0, &p, None).is_err());
    }

    #[test]
    fn records() {
        assert_eq!(upper_records(&[0.3, 0.7, 0.5, 0.9]), vec![(0, 0.3), (1, 0.7), (3, 0.9)]);
        assert_eq!(upper_records(&[1.0, 2.0, 3.0]).len(), 3);
        assert_eq!(upper_records(&[3.0, 2.0, 1.0]), vec![(0, 3.0)]);
        assert!((ong_max_1d_via_records(&[0.3, 0.7, 0.45, 0.9]).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(ong_max_1d_via_records(&[0.25]).unwrap(), 0.25);
        assert!(ong_max_1d_via_records(&[]).is_err());
        let direct = build_ong(&set(1, &[&[0.0], &[0.3], &[0.7], &[0.45], &[0.9]]));
        assert_eq!(
            max_edge_length(&direct),
            ong_max_1d_via_records(&[0.3, 0.7, 0.45, 0.9]).unwrap()
        );
    }

    #[test]
    fn boundary_extraction() {
        let p = set(2, &[&[0.2, 0.9], &[0.7, 0.1], &[0.4, 0.05]]);
        let c = extract_boundary_coupling(&p, 0.2).unwrap();
        assert_eq!(c.projected.as_flat(), &[0.4, 0.7]);
        assert_eq!(c.beta(), 2);
        let all = extract_boundary_coupling(&p, 0.95).unwrap();
        assert_eq!(all.beta(), 3);
        let none = extract_boundary_coupling(&p, 0.01).unwrap();
        assert!(none.boundary.is_empty() && none.projected.is_empty());
        assert!(extract_boundary_coupling(&set(1, &[&[0.5]]), 0.5).is_err());
    }

    #[test]
    fn coupling_report_edge_cases() {
        let empty = PointSet::new(2).unwrap();
        let proj = PointSet::new(1).unwrap();
        let r = verify_coupling_bounds(&empty, &proj, 1.0).unwrap();
        assert_eq!((r.ong_weight, r.mdst_weight, r.per_edge_violations), (0.0, 0.0, 0));
        let p = set(2, &[&[0.2, 0.1], &[0.5, 0.05]]);
        let bad = set(1, &[&[0.5]]);
        assert!(matches!(
            verify_coupling_bounds(&p, &bad, 1.0),
            Err(Error::InvalidInput(_))
        ));
        let swapped = set(1, &[&[0.2], &[0.5]]);
        assert!(matches!(
            verify_coupling_bounds(&p, &swapped, 1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn coupling_on_random_slab() {
        let cloud = sample_binomial_cloud(2_000, 3, 77).unwrap();
        let c = extract_boundary_coupling(&cloud.points, 0.05).unwrap();
        for alpha in [0.5, 1.0, 2.0, 3.0] {
            let r = verify_coupling_bounds(&c.boundary, &c.projected, alpha).unwrap();
            assert!(r.ordering_holds);
            assert_eq!(r.per_edge_violations, 0);
            if alpha >= 1.0 {
                assert!(r.mdst_weight - r.ong_weight <= r.aggregate_bound + 1e-12);
                assert!(r.aggregate_bound <= r.bound_constant * r.beta_n as f64 * c.height);
            }
        }
    }

    #[test]
    fn degree_domination_on_random_clouds() {
        for seed in 0..5 {
            let cloud = sample_binomial_cloud(200, 2 + (seed as usize % 2), seed).unwrap();
            assert_eq!(degree_domination_violations(&cloud.points).unwrap(), 0);
        }
    }

    #[test]
    fn running_max_matches_prefix_graphs() {
        let cloud = sample_binomial_cloud(60, 2, 8).unwrap();
        let g = build_ong(&cloud.points);
        let run = ong_running_max(&g);
        for m in 1..=60 {
            let prefix = PointSet::from_flat(2, cloud.points.as_flat()[..2 * m].to_vec()).unwrap();
            assert_eq!(max_edge_length(&build_ong(&prefix)), run[m - 1]);
        }
        assert!(run.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn graph_csv_round_trip() {
        let cloud = sample_binomial_cloud(30, 2, 4).unwrap();
        let g = build_mdst(&cloud.points, Strategy::Indexed).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"source,target,length\n"));
        let back = DirectedGraph::read_csv(&buf[..], GraphKind::Mdst, 30).unwrap();
        assert_eq!(back, g);
    }
}
