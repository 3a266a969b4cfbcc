use serde::Serialize;

use crate::linalg::C64;

/// A group of numerically coincident roots.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    /// Indices into the root array this cluster was built from.
    pub members: Vec<usize>,
    #[serde(serialize_with = "crate::spectral::ser_complex")]
    pub mean: C64,
    pub algebraic: usize,
}

/// Clustering radius used for roots of magnitude up to `scale`.
pub fn clustering_radius(scale: f64) -> f64 {
    1e-6 * scale.max(1.0)
}

pub(crate) fn lex_cmp(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Single-linkage clustering with radius `1e-6 * max(1, scale)`.
///
/// Roots are visited in lexicographic `(Re, Im)` order, so both the cluster
/// order and the member order are deterministic.
pub fn cluster_roots(roots: &[C64], scale: f64) -> Vec<Cluster> {
    let radius = clustering_radius(scale);
    let n = roots.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lex_cmp(&roots[a], &roots[b]));

    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }

    let mut clusters: Vec<(usize, Vec<usize>)> = Vec::new();
    for &i in &order {
        let root = find(&mut label, i);
        match clusters.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(i),
            None => clusters.push((root, vec![i])),
        }
    }
    clusters
        .into_iter()
        .map(|(_, members)| {
            let sum: C64 = members.iter().map(|&i| roots[i]).sum();
            let mean = sum / members.len() as f64;
            Cluster {
                algebraic: members.len(),
                members,
                mean,
            }
        })
        .collect()
}
