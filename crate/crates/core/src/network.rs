//! Network topologies and their cover by chain and star subnetworks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parties and the sources feeding them.
///
/// Every source carries one qubit (or classical share) per party it feeds.
/// Global qubits are ordered by source index, then by position inside the
/// source, so the first listed party of a source owns its most significant
/// qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTopology", into = "RawTopology")]
pub struct NetworkTopology {
    parties: Vec<String>,
    sources: Vec<Vec<String>>,
    index: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct RawTopology {
    parties: Vec<String>,
    sources: Vec<Vec<String>>,
}

impl TryFrom<RawTopology> for NetworkTopology {
    type Error = Error;

    fn try_from(raw: RawTopology) -> Result<Self> {
        NetworkTopology::new(raw.parties, raw.sources)
    }
}

impl From<NetworkTopology> for RawTopology {
    fn from(t: NetworkTopology) -> Self {
        RawTopology { parties: t.parties, sources: t.sources }
    }
}

impl NetworkTopology {
    pub fn new(parties: Vec<String>, sources: Vec<Vec<String>>) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::arg("topology has no parties"));
        }
        let mut index = BTreeMap::new();
        for (i, p) in parties.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::arg(format!("duplicate party {p}")));
            }
        }
        for (k, s) in sources.iter().enumerate() {
            if s.len() < 2 {
                return Err(Error::arg(format!("source {k} feeds fewer than two parties")));
            }
            let mut seen = BTreeSet::new();
            for p in s {
                if !index.contains_key(p) {
                    return Err(Error::arg(format!("source {k} feeds unknown party {p}")));
                }
                if !seen.insert(p) {
                    return Err(Error::arg(format!("source {k} feeds party {p} twice")));
                }
            }
        }
        let t = NetworkTopology { parties, sources, index };
        if t.parties.len() > 1 || !t.sources.is_empty() {
            t.check_connected()?;
        }
        Ok(t)
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.parties.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for s in 0..self.sources.len() {
            let members = self.source_parties(s);
            for w in members.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        for i in 0..n {
            if find(&mut parent, i) != root {
                return Err(Error::arg(format!("party {} is not connected to {}", self.parties[i], self.parties[0])));
            }
        }
        Ok(())
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    pub fn sources(&self) -> &[Vec<String>] {
        &self.sources
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    pub fn party_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Party indices fed by source `s`, in the source's own order.
    pub fn source_parties(&self, s: usize) -> Vec<usize> {
        self.sources[s].iter().map(|p| self.index[p]).collect()
    }

    /// Indices of the sources feeding `party`, ascending.
    pub fn incident_sources(&self, party: usize) -> Vec<usize> {
        let name = &self.parties[party];
        (0..self.sources.len()).filter(|&s| self.sources[s].contains(name)).collect()
    }

    pub fn degree(&self, party: usize) -> usize {
        self.incident_sources(party).len()
    }

    pub fn is_bipartite(&self) -> bool {
        self.sources.iter().all(|s| s.len() == 2)
    }

    /// Offset of each source's first qubit in the global register.
    pub fn source_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.sources.len());
        let mut acc = 0;
        for s in &self.sources {
            off.push(acc);
            acc += s.len();
        }
        off
    }

    /// Global qubit indices held by each party, ordered by source index.
    pub fn party_qubits(&self) -> Vec<Vec<usize>> {
        let offsets = self.source_offsets();
        let mut out = vec![Vec::new(); self.parties.len()];
        for (s, members) in self.sources.iter().enumerate() {
            for (pos, p) in members.iter().enumerate() {
                out[self.index[p]].push(offsets[s] + pos);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Chain,
    Star,
}

/// Chain `A1…An` with sources between neighbours, or star with branches
/// `A1…An` and central party `B` listed last.
pub fn make_topology(kind: NetworkKind, n: usize) -> Result<NetworkTopology> {
    let a = |i: usize| format!("A{i}");
    match kind {
        NetworkKind::Chain => {
            if n < 2 {
                return Err(Error::arg(format!("a chain needs at least 2 parties, got {n}")));
            }
            let parties = (1..=n).map(a).collect();
            let sources = (1..n).map(|i| vec![a(i), a(i + 1)]).collect();
            NetworkTopology::new(parties, sources)
        }
        NetworkKind::Star => {
            if n < 1 {
                return Err(Error::arg("a star needs at least 1 branch"));
            }
            let mut parties: Vec<String> = (1..=n).map(a).collect();
            parties.push("B".into());
            let sources = (1..=n).map(|i| vec![a(i), "B".into()]).collect();
            NetworkTopology::new(parties, sources)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subnetwork {
    pub kind: NetworkKind,
    /// Chains list parties along the path; stars list the branches first and
    /// the centre last.
    pub topology: NetworkTopology,
    /// `source_map[k]` is the parent index of the subnetwork's source `k`.
    pub source_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubnetworkCover {
    pub subnetworks: Vec<Subnetwork>,
}

impl SubnetworkCover {
    pub fn covered_sources(&self) -> BTreeSet<usize> {
        self.subnetworks.iter().flat_map(|s| s.source_map.iter().copied()).collect()
    }

    pub fn count(&self, kind: NetworkKind) -> usize {
        self.subnetworks.iter().filter(|s| s.kind == kind).count()
    }
}

/// Covers a network of bipartite sources by stars around every party of
/// degree at least 3 and chains along what is left.
///
/// Residual components that close into a cycle are cut into two chains that
/// overlap in one source.
pub fn decompose_into_chains_and_stars(topology: &NetworkTopology) -> Result<SubnetworkCover> {
    if !topology.is_bipartite() {
        return Err(Error::UnsupportedTopology(
            "decomposition needs bipartite sources; evaluate multipartite sources on an explicit party subset".into(),
        ));
    }
    let n = topology.num_parties();
    let ends: Vec<(usize, usize)> = (0..topology.num_sources())
        .map(|s| {
            let p = topology.source_parties(s);
            (p[0], p[1])
        })
        .collect();
    let other = |s: usize, p: usize| if ends[s].0 == p { ends[s].1 } else { ends[s].0 };
    let hub: Vec<bool> = (0..n).map(|p| topology.degree(p) >= 3).collect();
    let name = |p: usize| topology.parties()[p].clone();

    let mut subnetworks = Vec::new();
    for c in (0..n).filter(|&p| hub[p]) {
        let incident = topology.incident_sources(c);
        let leaves: Vec<usize> = incident.iter().map(|&s| other(s, c)).collect();
        if leaves.iter().collect::<BTreeSet<_>>().len() != leaves.len() {
            return Err(Error::UnsupportedTopology(format!("parallel sources at hub {}", name(c))));
        }
        let mut parties: Vec<String> = leaves.iter().map(|&p| name(p)).collect();
        parties.push(name(c));
        let sources = leaves.iter().map(|&p| vec![name(p), name(c)]).collect();
        subnetworks.push(Subnetwork {
            kind: NetworkKind::Star,
            topology: NetworkTopology::new(parties, sources)?,
            source_map: incident,
        });
    }

    // Residual graph: sources with no hub endpoint. Every vertex has degree <= 2.
    let residual: Vec<usize> = (0..ends.len()).filter(|&s| !hub[ends[s].0] && !hub[ends[s].1]).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &s in &residual {
        adj[ends[s].0].push(s);
        adj[ends[s].1].push(s);
    }
    let mut used = vec![false; ends.len()];
    let walk = |start: usize, first: usize, used: &mut Vec<bool>| -> (Vec<usize>, Vec<usize>) {
        let mut verts = vec![start];
        let mut edges = Vec::new();
        let (mut at, mut e) = (start, Some(first));
        while let Some(s) = e {
            used[s] = true;
            edges.push(s);
            at = other(s, at);
            verts.push(at);
            e = adj[at].iter().copied().find(|&t| !used[t]);
        }
        (verts, edges)
    };
    let by_name = |ps: &[usize]| {
        let mut v = ps.to_vec();
        v.sort_by(|&a, &b| topology.parties()[a].cmp(&topology.parties()[b]));
        v
    };

    // Paths first, started from the endpoint with the smaller name.
    let path_ends: Vec<usize> = by_name(&(0..n).filter(|&p| adj[p].len() == 1).collect::<Vec<_>>());
    for p in path_ends {
        if used[adj[p][0]] {
            continue;
        }
        let (verts, edges) = walk(p, adj[p][0], &mut used);
        subnetworks.push(chain_subnetwork(topology, &verts, &edges)?);
    }
    // Whatever is left consists of cycles.
    for p in by_name(&(0..n).collect::<Vec<_>>()) {
        let mut free: Vec<usize> = adj[p].iter().copied().filter(|&s| !used[s]).collect();
        if free.is_empty() {
            continue;
        }
        free.sort_by(|&a, &b| topology.parties()[other(a, p)].cmp(&topology.parties()[other(b, p)]).then(a.cmp(&b)));
        let (verts, edges) = walk(p, free[0], &mut used);
        let k = edges.len();
        if k == 2 {
            for (i, &e) in edges.iter().enumerate() {
                subnetworks.push(chain_subnetwork(topology, &verts[i..i + 2], &[e])?);
            }
            continue;
        }
        subnetworks.push(chain_subnetwork(topology, &verts[..k], &edges[..k - 1])?);
        let closing = [verts[k - 1], verts[0], verts[1]];
        subnetworks.push(chain_subnetwork(topology, &closing, &[edges[k - 1], edges[0]])?);
    }

    subnetworks.sort_by(|a, b| {
        a.topology.parties()[0]
            .cmp(&b.topology.parties()[0])
            .then(a.kind.cmp(&b.kind))
            .then(a.source_map.cmp(&b.source_map))
    });
    let cover = SubnetworkCover { subnetworks };
    if cover.covered_sources().len() != topology.num_sources() {
        return Err(Error::Internal("decomposition left a source uncovered".into()));
    }
    Ok(cover)
}

fn chain_subnetwork(parent: &NetworkTopology, verts: &[usize], edges: &[usize]) -> Result<Subnetwork> {
    let names: Vec<String> = verts.iter().map(|&p| parent.parties()[p].clone()).collect();
    let sources = names.windows(2).map(|w| w.to_vec()).collect();
    Ok(Subnetwork { kind: NetworkKind::Chain, topology: NetworkTopology::new(names, sources)?, source_map: edges.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo(parties: &[&str], sources: &[(&str, &str)]) -> NetworkTopology {
        NetworkTopology::new(
            parties.iter().map(|s| s.to_string()).collect(),
            sources.iter().map(|(a, b)| vec![a.to_string(), b.to_string()]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn chain_and_star_shapes() {
        let c = make_topology(NetworkKind::Chain, 3).unwrap();
        assert_eq!(c.num_parties(), 3);
        assert_eq!(c.sources(), &[vec!["A1".to_string(), "A2".into()], vec!["A2".to_string(), "A3".into()]]);
        let s = make_topology(NetworkKind::Star, 3).unwrap();
        assert_eq!(s.num_parties(), 4);
        assert!(s.sources().iter().all(|src| src.contains(&"B".to_string())));
        assert_eq!(make_topology(NetworkKind::Chain, 2).unwrap().num_sources(), 1);
        assert!(make_topology(NetworkKind::Chain, 1).is_err());
        assert!(make_topology(NetworkKind::Star, 0).is_err());
    }

    #[test]
    fn party_qubits_follow_source_order() {
        let c = make_topology(NetworkKind::Chain, 3).unwrap();
        assert_eq!(c.party_qubits(), vec![vec![0], vec![1, 2], vec![3]]);
    }

    #[test]
    fn invalid_topologies() {
        let p = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert!(NetworkTopology::new(p(&["A", "B"]), vec![p(&["A"])]).is_err());
        assert!(NetworkTopology::new(p(&["A", "B"]), vec![p(&["A", "C"])]).is_err());
        assert!(NetworkTopology::new(p(&["A", "B", "C"]), vec![p(&["A", "B"])]).is_err());
        assert!(NetworkTopology::new(p(&["A", "A"]), vec![p(&["A", "A"])]).is_err());
    }

    #[test]
    fn pure_chain_is_one_chain() {
        let c = make_topology(NetworkKind::Chain, 5).unwrap();
        let cover = decompose_into_chains_and_stars(&c).unwrap();
        assert_eq!(cover.subnetworks.len(), 1);
        assert_eq!(cover.subnetworks[0].kind, NetworkKind::Chain);
        assert_eq!(cover.subnetworks[0].source_map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn triangle_is_two_overlapping_chains() {
        let t = topo(&["A", "B", "C"], &[("A", "B"), ("B", "C"), ("C", "A")]);
        let cover = decompose_into_chains_and_stars(&t).unwrap();
        assert_eq!(cover.subnetworks.len(), 2);
        for s in &cover.subnetworks {
            assert_eq!(s.kind, NetworkKind::Chain);
            assert_eq!(s.topology.num_parties(), 3);
        }
        assert_eq!(cover.covered_sources().len(), 3);
    }

    #[test]
    fn multipartite_source_is_unsupported() {
        let p = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let t = NetworkTopology::new(p(&["A", "B", "C"]), vec![p(&["A", "B", "C"])]).unwrap();
        assert!(matches!(decompose_into_chains_and_stars(&t), Err(Error::UnsupportedTopology(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = make_topology(NetworkKind::Star, 2).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"parties":["A1","A2","B"],"sources":[["A1","B"],["A2","B"]]}"#);
        let back: NetworkTopology = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<NetworkTopology>(r#"{"parties":["A"],"sources":[["A","Z"]]}"#).is_err());
    }
}
