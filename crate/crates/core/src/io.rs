//! Text formats for datasets, trees and partitions.
//!
//! * vectors: CSV, one point per line, comma-separated reals of uniform arity
//! * sets: one set per line, whitespace-separated non-negative integer ids
//! * strings: UTF-8, one string per line
//! * trees: CSV `u,v,w` per line, or a JSON envelope
//! * partitions: CSV `point_index,component_id` per line plus a JSON header

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::completion::CompletionResult;
use crate::error::{Error, Result};
use crate::forest::Partition;
use crate::metric::{DataKind, Dataset, QueryLedger};
use crate::mst::{Edge, SpanningTree};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

pub fn read_vectors(path: &Path) -> Result<Dataset> {
    let text = read(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (no, line) in lines(&text) {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(path, no, format!("`{}` is not a number", tok.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(
                    path,
                    no,
                    format!("expected {} values, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    Dataset::vectors(rows)
}

pub fn read_sets(path: &Path) -> Result<Dataset> {
    let text = read(path)?;
    let sets = lines(&text)
        .map(|(no, line)| {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>()
                        .map_err(|_| parse_err(path, no, format!("`{tok}` is not a non-negative integer id")))
                })
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::sets(sets)
}

pub fn read_strings(path: &Path) -> Result<Dataset> {
    let text = read(path)?;
    let strings: Vec<&str> = lines(&text).map(|(_, l)| l).collect();
    Dataset::strings(&strings)
}

pub fn read_dataset(path: &Path, kind: DataKind) -> Result<Dataset> {
    match kind {
        DataKind::Vectors => read_vectors(path),
        DataKind::Sets => read_sets(path),
        DataKind::Strings => read_strings(path),
        DataKind::Planted => Err(Error::Config(
            "planted instances have no point file; generate them instead".into(),
        )),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Writes `dataset` in the loader format of its kind.
pub fn write_dataset(path: &Path, dataset: &Dataset) -> Result<()> {
    let mut out = create(path)?;
    let io = |e| Error::io(path, e);
    for i in 0..dataset.len() {
        match dataset.kind() {
            DataKind::Vectors => {
                let row: Vec<String> = dataset.vector(i).unwrap().iter().map(f64::to_string).collect();
                writeln!(out, "{}", row.join(",")).map_err(io)?;
            }
            DataKind::Sets => {
                let row: Vec<String> = dataset.set(i).unwrap().iter().map(u32::to_string).collect();
                writeln!(out, "{}", row.join(" ")).map_err(io)?;
            }
            DataKind::Strings => writeln!(out, "{}", dataset.string(i).unwrap()).map_err(io)?,
            DataKind::Planted => {
                return Err(Error::Config("planted instances are stored as JSON sidecars only".into()))
            }
        }
    }
    out.flush().map_err(io)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}

pub fn tree_csv(tree: &SpanningTree) -> String {
    let mut s = String::new();
    for e in &tree.edges {
        s.push_str(&format!("{},{},{}\n", e.u, e.v, e.w));
    }
    s
}

pub fn write_tree_csv(path: &Path, tree: &SpanningTree) -> Result<()> {
    let mut out = create(path)?;
    out.write_all(tree_csv(tree).as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

/// Reads `u,v,w` lines; an optional `u,v,w` header line is skipped.
pub fn read_tree_csv(path: &Path) -> Result<SpanningTree> {
    let text = read(path)?;
    let mut edges = Vec::new();
    for (no, line) in lines(&text) {
        let line = line.trim();
        if line.is_empty() || (no == 1 && line == "u,v,w") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [u, v, w] = fields[..] else {
            return Err(parse_err(path, no, "expected `u,v,w`"));
        };
        let idx = |s: &str| s.parse::<usize>().map_err(|_| parse_err(path, no, format!("bad index `{s}`")));
        let (u, v) = (idx(u)?, idx(v)?);
        let w = w.parse::<f64>().map_err(|_| parse_err(path, no, format!("bad weight `{w}`")))?;
        if u == v {
            return Err(parse_err(path, no, "self-loop"));
        }
        edges.push(Edge::new(u, v, w));
    }
    Ok(SpanningTree::from_edges(edges))
}

/// JSON form of a spanning tree with its weight and query counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeEnvelope {
    pub n: usize,
    pub total_weight: f64,
    pub edges: Vec<Edge>,
    pub queries: QueryLedger,
}

impl TreeEnvelope {
    pub fn new(n: usize, tree: &SpanningTree, queries: QueryLedger) -> Self {
        TreeEnvelope {
            n,
            total_weight: tree.total_weight,
            edges: tree.edges.clone(),
            queries,
        }
    }
}

/// Tree envelope extended with the completion set and the flags of the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletionEnvelope {
    #[serde(flatten)]
    pub tree: TreeEnvelope,
    pub completion_edges: Vec<Edge>,
    pub coarsened_tree: SpanningTree,
    pub w_completion: f64,
    pub w_forest: f64,
    pub three_way: bool,
    pub representative_policy: String,
}

impl CompletionEnvelope {
    pub fn new(n: usize, result: &CompletionResult, queries: QueryLedger, three_way: bool, policy: &str) -> Self {
        CompletionEnvelope {
            tree: TreeEnvelope::new(n, &result.full_tree, queries),
            completion_edges: result.completion_edges.clone(),
            coarsened_tree: result.coarsened_tree.clone(),
            w_completion: result.w_completion,
            w_forest: result.w_forest,
            three_way,
            representative_policy: policy.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionHeader {
    pub n: usize,
    pub t: usize,
    pub representatives: Option<Vec<usize>>,
    pub params: serde_json::Value,
}

pub fn partition_csv(partition: &Partition) -> String {
    partition
        .assignment()
        .iter()
        .enumerate()
        .map(|(x, c)| format!("{x},{c}\n"))
        .collect()
}

pub fn write_partition(csv_path: &Path, header_path: &Path, partition: &Partition, params: serde_json::Value) -> Result<()> {
    let mut out = create(csv_path)?;
    out.write_all(partition_csv(partition).as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(csv_path, e))?;
    write_json(
        header_path,
        &PartitionHeader {
            n: partition.n(),
            t: partition.t(),
            representatives: partition.representatives().map(<[usize]>::to_vec),
            params,
        },
    )
}

/// Reads `point_index,component_id` lines; every index in `0..n` must appear once.
pub fn read_partition_csv(path: &Path) -> Result<Partition> {
    let text = read(path)?;
    let mut pairs = Vec::new();
    for (no, line) in lines(&text) {
        let line = line.trim();
        if line.is_empty() || (no == 1 && line == "point_index,component_id") {
            continue;
        }
        let (x, c) = line
            .split_once(',')
            .ok_or_else(|| parse_err(path, no, "expected `point_index,component_id`"))?;
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| parse_err(path, no, format!("bad integer `{s}`")));
        pairs.push((num(x)?, num(c)?));
    }
    let n = pairs.len();
    let mut assignment = vec![usize::MAX; n];
    for &(x, c) in &pairs {
        if x >= n || assignment[x] != usize::MAX {
            return Err(Error::Input(format!(
                "{}: point indices must be a permutation of 0..{n} (offending index {x})",
                path.display()
            )));
        }
        assignment[x] = c;
    }
    Partition::new(assignment, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn vectors_parse_and_reject_ragged() {
        let ds = read_vectors(file("0,0\n3,4\n\n").path()).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.vector(1).unwrap(), &[3.0, 4.0]);
        let err = read_vectors(file("0,0\n1\n").path()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(read_vectors(file("a,b\n").path()), Err(Error::Parse { .. })));
    }

    #[test]
    fn sets_and_strings_parse() {
        let ds = read_sets(file("3 1 2\n\n7\n").path()).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.set(0).unwrap(), &[1, 2, 3]);
        assert!(ds.set(1).unwrap().is_empty());
        assert!(read_sets(file("1 -2\n").path()).is_err());

        let ds = read_strings(file("kitten\r\nsitting\n\nnaïve\n").path()).unwrap();
        assert_eq!(ds.len(), 4);
        assert_eq!(ds.string(0).unwrap(), "kitten");
        assert_eq!(ds.string(2).unwrap(), "");
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_vectors(Path::new("/definitely/not/here.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn dataset_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ds = Dataset::vectors(vec![vec![0.1, -2.5], vec![1e-17, 3.0]]).unwrap();
        let path = dir.path().join("v.csv");
        write_dataset(&path, &ds).unwrap();
        assert_eq!(read_vectors(&path).unwrap(), ds);

        let ds = Dataset::strings(&["ab", "", "ç"]).unwrap();
        let path = dir.path().join("s.txt");
        write_dataset(&path, &ds).unwrap();
        assert_eq!(read_strings(&path).unwrap(), ds);
    }

    #[test]
    fn tree_and_partition_files() {
        let dir = tempfile::tempdir().unwrap();
        let tree = SpanningTree::from_edges(vec![Edge::new(0, 1, 0.5), Edge::new(2, 1, 1.25)]);
        let path = dir.path().join("t.csv");
        write_tree_csv(&path, &tree).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "0,1,0.5\n1,2,1.25\n");
        assert_eq!(read_tree_csv(&path).unwrap(), tree);

        let p = Partition::new(vec![1, 0, 1], Some(vec![1, 2])).unwrap();
        let (csv, header) = (dir.path().join("p.csv"), dir.path().join("p.json"));
        write_partition(&csv, &header, &p, serde_json::json!({"strategy": "kcenter"})).unwrap();
        assert_eq!(std::fs::read_to_string(&csv).unwrap(), "0,1\n1,0\n2,1\n");
        let back = read_partition_csv(&csv).unwrap();
        assert_eq!(back.assignment(), p.assignment());
        let h: PartitionHeader = serde_json::from_str(&std::fs::read_to_string(&header).unwrap()).unwrap();
        assert_eq!(h.representatives, Some(vec![1, 2]));
    }
}
