//! Equitable partitions by color refinement, the class-basis quotient of an
//! adjacency matrix, and the Gershgorin bound it yields on the principal
//! eigenvalue.
//!
//! Automorphism orbits are never computed. The coarsest equitable partition
//! is coarser than or equal to any orbit partition, every orbit partition is
//! equitable, and the principal eigenvector of a connected graph is constant
//! on the classes of any equitable partition, so the quotient bound holds for
//! it just the same.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, Graph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl Partition {
    /// Build from explicit classes; they must cover `0..n` disjointly.
    pub fn from_classes(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut class_of = vec![usize::MAX; n];
        for (c, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::Validation(format!("class {c} is empty")));
            }
            for &m in members {
                if m >= n {
                    return Err(Error::ForeignNode { node: m, n });
                }
                if class_of[m] != usize::MAX {
                    return Err(Error::Validation(format!("node {m} appears in two classes")));
                }
                class_of[m] = c;
            }
        }
        if let Some(m) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Validation(format!("node {m} is in no class")));
        }
        Ok(Partition { classes, class_of })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, node: usize) -> usize {
        self.class_of[node]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Number of nodes of each class adjacent to `node`.
    fn profile(&self, g: &Graph, node: usize) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for j in g.neighbors(node) {
            counts[self.class_of[j]] += 1;
        }
        counts
    }
}

/// Coarsest equitable partition by 1-dimensional Weisfeiler-Leman
/// refinement, starting from node degrees. Classes are ordered by
/// `(size, lowest member)`.
pub fn equitable_partition(g: &Graph) -> Partition {
    let n = g.n();
    let mut colors: Vec<usize> = relabel((0..n).map(|i| g.node_degree(i)).collect::<Vec<_>>());
    let mut count = colors.iter().max().map_or(0, |m| m + 1);
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut nb: Vec<usize> = g.neighbors(i).map(|j| colors[j]).collect();
                nb.sort_unstable();
                (colors[i], nb)
            })
            .collect();
        let next = relabel(signatures);
        let next_count = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (i, &c) in colors.iter().enumerate() {
        classes[c].push(i);
    }
    classes.sort_by_key(|c| (c.len(), c[0]));
    Partition::from_classes(n, classes).expect("refinement yields a partition")
}

/// Dense relabeling of arbitrary ordered keys to `0..k`.
fn relabel<K: Ord + Clone>(keys: Vec<K>) -> Vec<usize> {
    let mut ids: BTreeMap<K, usize> = BTreeMap::new();
    for k in &keys {
        let next = ids.len();
        ids.entry(k.clone()).or_insert(next);
    }
    // Re-number in key order so the labeling does not depend on node order.
    for (rank, id) in ids.values_mut().enumerate() {
        *id = rank;
    }
    keys.iter().map(|k| ids[k]).collect()
}

/// Adjacency matrix in the basis of normalized class indicator vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientMatrix {
    /// `B[ξ][ξ'] = √(|ξ|/|ξ'|) · |E_ξξ'|`.
    pub entries: DMatrix<f64>,
    pub class_sizes: Vec<usize>,
    /// `|E_ξξ'|`: neighbors in class `ξ'` of any node of class `ξ`.
    pub counts: Vec<Vec<usize>>,
}

/// Build the quotient matrix, verifying equitability node by node.
pub fn quotient_matrix(g: &Graph, p: &Partition) -> Result<QuotientMatrix> {
    if p.class_of.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            got: p.class_of.len(),
        });
    }
    let sizes = p.sizes();
    let mut counts = Vec::with_capacity(p.len());
    for members in p.classes() {
        let reference = p.profile(g, members[0]);
        for &m in &members[1..] {
            let prof = p.profile(g, m);
            if prof != reference {
                return Err(Error::Validation(format!(
                    "partition is not equitable: node {m} has class profile {prof:?}, node {} has {reference:?}",
                    members[0]
                )));
            }
        }
        counts.push(reference);
    }
    let k = p.len();
    let entries = DMatrix::from_fn(k, k, |a, b| {
        (sizes[a] as f64 / sizes[b] as f64).sqrt() * counts[a][b] as f64
    });
    Ok(QuotientMatrix {
        entries,
        class_sizes: sizes,
        counts,
    })
}

/// Maximal absolute row sum of the quotient matrix.
pub fn gershgorin_bound(q: &QuotientMatrix) -> f64 {
    q.entries
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Gershgorin in the computational basis, counted per class:
/// `max_ξ Σ_ξ' |E_ξξ'|`.
pub fn class_counted_gershgorin(q: &QuotientMatrix) -> usize {
    q.counts.iter().map(|r| r.iter().sum()).max().unwrap_or(0)
}

/// Upper bound on the principal eigenvalue: the quotient Gershgorin bound
/// capped at the maximal degree, taken per connected component.
pub fn improved_lambda_upper(g: &Graph) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::EmptySet);
    }
    let comps = connected_components(g);
    if comps.len() == 1 {
        return component_bound(g);
    }
    let mut best = 0.0f64;
    for c in comps {
        let (sub, _) = induced_subgraph(g, &c)?;
        best = best.max(component_bound(&sub)?);
    }
    Ok(best)
}

fn component_bound(g: &Graph) -> Result<f64> {
    let q = quotient_matrix(g, &equitable_partition(g))?;
    Ok(gershgorin_bound(&q).min(g.max_degree() as f64))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PartitionJson {
    pub classes: Vec<Vec<usize>>,
}

impl From<&Partition> for PartitionJson {
    fn from(p: &Partition) -> Self {
        PartitionJson {
            classes: p.classes.clone(),
        }
    }
}

/// Quotient summary embedded in bounds reports.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QuotientJson {
    pub classes: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    pub gershgorin: f64,
}

impl From<&QuotientMatrix> for QuotientJson {
    fn from(q: &QuotientMatrix) -> Self {
        QuotientJson {
            classes: q.class_sizes.clone(),
            b: q.entries.row_iter().map(|r| r.iter().copied().collect()).collect(),
            gershgorin: gershgorin_bound(q),
        }
    }
}
