//! Multi-field search campaigns with per-field JSON checkpoints.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ring::{make_ring, ElemJson, QuadInt};
use crate::search::clique::{find_cliques, find_cliques_symmetric};
use crate::search::{build_graph, enum_elements};
use crate::tuples::{tuple_orbit, verify_tuple, DioTuple};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub d_list: Vec<u64>,
    /// Inclusive bound on the norm of every element.
    pub max_norm: u64,
    pub k: usize,
    pub n: i64,
    pub symmetry_prune: bool,
    pub jobs: usize,
    pub checkpoint_path: Option<PathBuf>,
}

impl SearchConfig {
    pub fn new(d_list: Vec<u64>, max_norm: u64, k: usize, n: i64) -> Self {
        SearchConfig { d_list, max_norm, k, n, symmetry_prune: true, jobs: 1, checkpoint_path: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_norm < 1 {
            return Err(Error::InvalidConfig("max_norm must be at least 1".into()));
        }
        if self.k < 2 {
            return Err(Error::InvalidConfig("k must be at least 2".into()));
        }
        if self.jobs < 1 {
            return Err(Error::InvalidConfig("jobs must be at least 1".into()));
        }
        if self.d_list.is_empty() {
            return Err(Error::InvalidConfig("empty D list".into()));
        }
        for &d in &self.d_list {
            make_ring(d as i64)?;
        }
        Ok(())
    }

    /// The part of the configuration that determines the results.
    pub fn echo(&self) -> ConfigEcho {
        let mut d_list = self.d_list.clone();
        d_list.sort_unstable();
        d_list.dedup();
        ConfigEcho { d_list, max_norm: self.max_norm, k: self.k, n: self.n, symmetry_prune: self.symmetry_prune }
    }
}

/// Squarefree `D` with `lo ≤ D ≤ hi`.
pub fn squarefree_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(1)..=hi).filter(|&d| crate::ring::is_squarefree(d)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(rename = "D_list")]
    pub d_list: Vec<u64>,
    pub max_norm: u64,
    pub k: usize,
    pub n: i64,
    pub symmetry_prune: bool,
}

impl ConfigEcho {
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldResult {
    #[serde(rename = "D")]
    pub d: u64,
    pub vertices: usize,
    pub edges: usize,
    /// Every k-clique, orbit expansions included.
    pub cliques: Vec<Vec<ElemJson>>,
    /// One clique per symmetry orbit (the least in canonical order).
    pub representatives: Vec<Vec<ElemJson>>,
    pub wall_ms: u64,
}

impl FieldResult {
    pub fn tuples(&self, n: i64) -> Result<Vec<DioTuple>> {
        let ring = make_ring(self.d as i64)?;
        self.cliques
            .iter()
            .map(|c| {
                let elems = c.iter().cloned().map(|e| e.into_elem(ring)).collect::<Result<Vec<_>>>()?;
                DioTuple::with_int_shift(ring, n, elems)
            })
            .collect()
    }

    /// Same content, ignoring timing.
    pub fn same_outcome(&self, other: &FieldResult) -> bool {
        self.d == other.d
            && self.vertices == other.vertices
            && self.edges == other.edges
            && self.cliques == other.cliques
            && self.representatives == other.representatives
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema: u32,
    pub version: String,
    pub config: ConfigEcho,
    pub results: Vec<FieldResult>,
    pub total_cliques: usize,
}

impl SearchReport {
    pub fn result_for(&self, d: u64) -> Option<&FieldResult> {
        self.results.iter().find(|r| r.d == d)
    }

    /// One line per clique: `D,k,e1,...,ek` using the element text grammar.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from("D,k,elems\n");
        for r in &self.results {
            let ring = make_ring(r.d as i64)?;
            for c in &r.cliques {
                let elems = c.iter().cloned().map(|e| e.into_elem(ring).map(|q| q.format())).collect::<Result<Vec<_>>>()?;
                out.push_str(&format!("{},{},{}\n", r.d, c.len(), elems.join(",")));
            }
        }
        Ok(out)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_atomic(path, &serde_json::to_vec_pretty(self)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Checkpoint {
    schema: u32,
    config_hash: String,
    config: ConfigEcho,
    completed: Vec<FieldResult>,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn load_checkpoint(path: &Path, echo: &ConfigEcho) -> Result<Vec<FieldResult>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read(path).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
    let ck: Checkpoint =
        serde_json::from_slice(&text).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
    if ck.schema != SCHEMA_VERSION {
        return Err(Error::Checkpoint(format!("schema {} is not supported", ck.schema)));
    }
    if ck.config_hash != echo.hash() || ck.config != *echo {
        return Err(Error::Checkpoint(format!("{} was written for a different configuration", path.display())));
    }
    Ok(ck.completed)
}

/// Enumerates, builds the graph and lists the k-cliques for one field.
pub fn run_field(d: u64, cfg: &SearchConfig) -> Result<FieldResult> {
    let start = Instant::now();
    let ring = make_ring(d as i64)?;
    let n = QuadInt::from_int(ring, cfg.n);
    let elements = enum_elements(ring, cfg.max_norm);
    let g = build_graph(&elements, &n);
    let index_sets = if cfg.symmetry_prune { find_cliques_symmetric(&g, cfg.k) } else { find_cliques(&g, cfg.k) };

    let mut cliques = Vec::with_capacity(index_sets.len());
    let mut reps = std::collections::BTreeSet::new();
    for set in &index_sets {
        let elems: Vec<QuadInt> = set.iter().map(|&i| g.vertices()[i].clone()).collect();
        let t = DioTuple::new(ring, n.clone(), elems.clone())?;
        if !verify_tuple(&t).pass {
            return Err(Error::Worker(format!("D = {d}: reported clique failed re-verification")));
        }
        let rep = tuple_orbit(&t).into_iter().min_by(|a, b| a.elems().cmp(b.elems())).expect("orbit contains t");
        reps.insert(rep.elems().to_vec());
        cliques.push(elems);
    }
    let to_json = |c: &Vec<QuadInt>| c.iter().map(ElemJson::from).collect::<Vec<_>>();
    Ok(FieldResult {
        d,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        cliques: cliques.iter().map(to_json).collect(),
        representatives: reps.iter().map(to_json).collect(),
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs every field of the campaign. With a checkpoint path, fields finished
/// by an earlier run under the same configuration are reused and the
/// checkpoint is rewritten after each new field.
pub fn run_campaign(cfg: &SearchConfig) -> Result<SearchReport> {
    run_campaign_with(cfg, run_field)
}

/// [`run_campaign`] with a caller-supplied per-field worker.
pub fn run_campaign_with<F>(cfg: &SearchConfig, worker: F) -> Result<SearchReport>
where
    F: Fn(u64, &SearchConfig) -> Result<FieldResult> + Sync,
{
    cfg.validate()?;
    let echo = cfg.echo();
    let hash = echo.hash();
    let mut done: BTreeMap<u64, FieldResult> = BTreeMap::new();
    if let Some(path) = &cfg.checkpoint_path {
        for r in load_checkpoint(path, &echo)? {
            done.insert(r.d, r);
        }
    }
    let pending: Vec<u64> = echo.d_list.iter().copied().filter(|d| !done.contains_key(d)).collect();

    let save = |done: &BTreeMap<u64, FieldResult>| -> Result<()> {
        if let Some(path) = &cfg.checkpoint_path {
            let ck = Checkpoint {
                schema: SCHEMA_VERSION,
                config_hash: hash.clone(),
                config: echo.clone(),
                completed: done.values().cloned().collect(),
            };
            write_atomic(path, &serde_json::to_vec(&ck)?)?;
        }
        Ok(())
    };

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let mut failure: Option<Error> = None;
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(u64, Result<FieldResult>)>();
        for _ in 0..cfg.jobs.min(pending.len().max(1)) {
            let tx = tx.clone();
            let (next, abort, pending, worker) = (&next, &abort, &pending, &worker);
            scope.spawn(move || loop {
                if abort.load(Ordering::SeqCst) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(&d) = pending.get(i) else { break };
                let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| worker(d, cfg)))
                    .unwrap_or_else(|_| Err(Error::Worker(format!("D = {d}: worker panicked"))));
                if tx.send((d, outcome)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (d, outcome) in rx {
            match outcome {
                Ok(r) if failure.is_none() => {
                    done.insert(d, r);
                    if let Err(e) = save(&done) {
                        abort.store(true, Ordering::SeqCst);
                        failure = Some(e);
                    }
                }
                Ok(_) => {}
                Err(e) => {
                    abort.store(true, Ordering::SeqCst);
                    failure.get_or_insert(e);
                }
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    let results: Vec<FieldResult> = echo.d_list.iter().map(|d| done[d].clone()).collect();
    let total_cliques = results.iter().map(|r| r.cliques.len()).sum();
    Ok(SearchReport {
        schema: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: echo,
        results,
        total_cliques,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(vec![1], 10, 1, -1).validate().is_err());
        assert!(SearchConfig::new(vec![1], 0, 3, -1).validate().is_err());
        assert!(SearchConfig::new(vec![4], 10, 3, -1).validate().is_err());
        assert!(SearchConfig::new(vec![], 10, 3, -1).validate().is_err());
        assert!(SearchConfig::new(vec![1, 2, 3], 10, 3, -1).validate().is_ok());
    }

    #[test]
    fn squarefree_list() {
        assert_eq!(squarefree_range(1, 12), vec![1, 2, 3, 5, 6, 7, 10, 11]);
        assert_eq!(squarefree_range(1, 225).len(), 139);
    }

    #[test]
    fn hash_ignores_jobs_and_order() {
        let mut a = SearchConfig::new(vec![2, 1], 10, 3, -1);
        let mut b = SearchConfig::new(vec![1, 2], 10, 3, -1);
        a.jobs = 4;
        b.checkpoint_path = Some("x".into());
        assert_eq!(a.echo().hash(), b.echo().hash());
        b.max_norm = 11;
        assert_ne!(a.echo().hash(), b.echo().hash());
    }
}
