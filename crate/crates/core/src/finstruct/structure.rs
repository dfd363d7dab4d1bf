use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Identifier of one of the built-in homogeneous classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassId {
    PureSet,
    LinearOrder,
    Graph,
    /// Vector spaces over the prime field `F_q`.
    VectorSpace { q: u8 },
    BooleanAlgebra,
}

impl ClassId {
    pub const ALL: [ClassId; 6] = [
        ClassId::PureSet,
        ClassId::LinearOrder,
        ClassId::Graph,
        ClassId::VectorSpace { q: 2 },
        ClassId::VectorSpace { q: 3 },
        ClassId::BooleanAlgebra,
    ];

    /// Name used in structure files (`q` lives in the payload for vector spaces).
    pub fn file_name(&self) -> &'static str {
        match self {
            ClassId::PureSet => "pure_set",
            ClassId::LinearOrder => "linear_order",
            ClassId::Graph => "graph",
            ClassId::VectorSpace { .. } => "vector_space",
            ClassId::BooleanAlgebra => "boolean_algebra",
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassId::VectorSpace { q } => write!(f, "vector_space_q{q}"),
            other => f.write_str(other.file_name()),
        }
    }
}

impl serde::Serialize for ClassId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pure_set" | "set" => ClassId::PureSet,
            "linear_order" | "order" => ClassId::LinearOrder,
            "graph" => ClassId::Graph,
            "vector_space" | "vector_space_q2" => ClassId::VectorSpace { q: 2 },
            "vector_space_q3" => ClassId::VectorSpace { q: 3 },
            "boolean_algebra" => ClassId::BooleanAlgebra,
            other => return Err(Error::Config(format!("unknown class `{other}`"))),
        })
    }
}

/// Class-specific data of a [`FinStructure`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Payload {
    Set,
    /// `rank[i]` is the position of point `i` in the order.
    Order { rank: Vec<usize> },
    /// Symmetric irreflexive adjacency, one bitmask row per point.
    Graph { adjacency: Vec<u64> },
    /// Each point is a coordinate vector in `F_q^dim`.
    Vector { q: u8, dim: usize, vectors: Vec<Vec<u8>> },
    /// Each point is an element of the finite algebra `2^atoms`, as a bitmask.
    Boolean { atoms: usize, elements: Vec<u64> },
}

/// A finite structure: named points plus class data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinStructure {
    pub class: ClassId,
    pub points: Vec<String>,
    pub data: Payload,
}

pub(crate) fn index_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl FinStructure {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn pure_set(n: usize) -> Self {
        FinStructure {
            class: ClassId::PureSet,
            points: index_names(n),
            data: Payload::Set,
        }
    }

    /// Linear order whose points `0..n` appear in increasing order.
    pub fn chain(n: usize) -> Self {
        FinStructure {
            class: ClassId::LinearOrder,
            points: index_names(n),
            data: Payload::Order {
                rank: (0..n).collect(),
            },
        }
    }

    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![0u64; n];
        for &(a, b) in edges {
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
        }
        FinStructure {
            class: ClassId::Graph,
            points: index_names(n),
            data: Payload::Graph { adjacency },
        }
    }

    pub fn vectors(q: u8, dim: usize, vectors: Vec<Vec<u8>>) -> Self {
        FinStructure {
            class: ClassId::VectorSpace { q },
            points: index_names(vectors.len()),
            data: Payload::Vector { q, dim, vectors },
        }
    }

    pub fn boolean(atoms: usize, elements: Vec<u64>) -> Self {
        FinStructure {
            class: ClassId::BooleanAlgebra,
            points: index_names(elements.len()),
            data: Payload::Boolean { atoms, elements },
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        match &self.data {
            Payload::Graph { adjacency } => adjacency[a] >> b & 1 == 1,
            _ => false,
        }
    }

    /// Checks that the payload matches the class and is internally consistent.
    pub fn check_shape(&self) -> Result<()> {
        let n = self.len();
        let bad = |m: String| Err(Error::MalformedStructure(m));
        let mut seen = HashMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if let Some(j) = seen.insert(p.as_str(), i) {
                return bad(format!("point name `{p}` repeated at {j} and {i}"));
            }
        }
        match (&self.class, &self.data) {
            (ClassId::PureSet, Payload::Set) => {}
            (ClassId::LinearOrder, Payload::Order { rank }) => {
                let mut sorted = rank.clone();
                sorted.sort_unstable();
                if sorted != (0..n).collect::<Vec<_>>() {
                    return bad("order ranks are not a permutation of the points".into());
                }
            }
            (ClassId::Graph, Payload::Graph { adjacency }) => {
                if n > 64 || adjacency.len() != n {
                    return bad("adjacency does not match the point list".into());
                }
                for (a, row) in adjacency.iter().enumerate() {
                    if row >> a & 1 == 1 {
                        return bad(format!("loop at point {a}"));
                    }
                    if n < 64 && row >> n != 0 {
                        return bad("edge to a missing point".into());
                    }
                    for b in 0..n {
                        if (row >> b & 1) != (adjacency[b] >> a & 1) {
                            return bad("adjacency is not symmetric".into());
                        }
                    }
                }
            }
            (ClassId::VectorSpace { q: cq }, Payload::Vector { q, dim, vectors }) => {
                if cq != q || !matches!(q, 2 | 3 | 5 | 7) {
                    return bad(format!("unsupported field size {q}"));
                }
                if vectors.len() != n {
                    return bad("one vector per point required".into());
                }
                if vectors.iter().any(|v| v.len() != *dim || v.iter().any(|&c| c >= *q)) {
                    return bad("vector coordinates out of range".into());
                }
                let mut uniq = vectors.clone();
                uniq.sort();
                uniq.dedup();
                if uniq.len() != n {
                    return bad("two points carry the same vector".into());
                }
            }
            (ClassId::BooleanAlgebra, Payload::Boolean { atoms, elements }) => {
                if *atoms == 0 || *atoms > 63 {
                    return bad(format!("unsupported atom count {atoms}"));
                }
                if elements.len() != n || elements.iter().any(|&e| e >> atoms != 0) {
                    return bad("element masks out of range".into());
                }
                let mut uniq = elements.clone();
                uniq.sort_unstable();
                uniq.dedup();
                if uniq.len() != n {
                    return bad("two points carry the same element".into());
                }
            }
            _ => return bad(format!("payload does not belong to class {}", self.class)),
        }
        Ok(())
    }

    /// Substructure on the listed points, in the given order.
    pub fn induced(&self, idx: &[usize]) -> FinStructure {
        let points = idx.iter().map(|&i| self.points[i].clone()).collect();
        let data = match &self.data {
            Payload::Set => Payload::Set,
            Payload::Order { rank } => {
                let mut sel: Vec<(usize, usize)> = idx.iter().enumerate().map(|(k, &i)| (rank[i], k)).collect();
                sel.sort_unstable();
                let mut new_rank = vec![0; idx.len()];
                for (r, (_, k)) in sel.into_iter().enumerate() {
                    new_rank[k] = r;
                }
                Payload::Order { rank: new_rank }
            }
            Payload::Graph { adjacency } => Payload::Graph {
                adjacency: idx
                    .iter()
                    .map(|&a| {
                        idx.iter()
                            .enumerate()
                            .filter(|(_, &b)| adjacency[a] >> b & 1 == 1)
                            .fold(0u64, |m, (k, _)| m | 1 << k)
                    })
                    .collect(),
            },
            Payload::Vector { q, dim, vectors } => Payload::Vector {
                q: *q,
                dim: *dim,
                vectors: idx.iter().map(|&i| vectors[i].clone()).collect(),
            },
            Payload::Boolean { atoms, elements } => Payload::Boolean {
                atoms: *atoms,
                elements: idx.iter().map(|&i| elements[i]).collect(),
            },
        };
        FinStructure {
            class: self.class,
            points,
            data,
        }
    }

    /// Moves point `i` to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FinStructure {
        let n = self.len();
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        self.induced(&inv)
    }

    pub fn to_json_value(&self) -> Value {
        let name = |i: usize| self.points[i].clone();
        let data = match &self.data {
            Payload::Set => json!({}),
            Payload::Order { rank } => {
                let mut by_rank = vec![0; rank.len()];
                for (i, &r) in rank.iter().enumerate() {
                    by_rank[r] = i;
                }
                json!({ "order": by_rank.into_iter().map(name).collect::<Vec<_>>() })
            }
            Payload::Graph { adjacency } => {
                let mut edges = Vec::new();
                for (a, row) in adjacency.iter().enumerate() {
                    for b in a + 1..self.len() {
                        if row >> b & 1 == 1 {
                            edges.push([name(a), name(b)]);
                        }
                    }
                }
                json!({ "edges": edges })
            }
            Payload::Vector { q, dim, vectors } => json!({ "q": q, "dim": dim, "vectors": vectors }),
            Payload::Boolean { atoms, elements } => {
                let lists: Vec<Vec<usize>> = elements
                    .iter()
                    .map(|&e| (0..*atoms).filter(|a| e >> a & 1 == 1).collect())
                    .collect();
                json!({ "atoms": atoms, "elements": lists })
            }
        };
        json!({ "class": self.class.file_name(), "points": self.points, "data": data })
    }

    pub fn from_json_value(v: &Value) -> Result<FinStructure> {
        let raw: RawStructure =
            serde_json::from_value(v.clone()).map_err(|e| Error::MalformedStructure(e.to_string()))?;
        raw.try_into()
    }

    pub fn from_json(text: &str) -> Result<FinStructure> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::MalformedStructure(e.to_string()))?;
        Self::from_json_value(&v)
    }
}

#[derive(Deserialize)]
struct RawStructure {
    class: String,
    points: Vec<String>,
    #[serde(default)]
    data: Value,
}

#[derive(Deserialize)]
struct RawOrder {
    order: Vec<String>,
}

#[derive(Deserialize)]
struct RawGraph {
    #[serde(default)]
    edges: Vec<(String, String)>,
}

#[derive(Deserialize)]
struct RawVector {
    q: u8,
    dim: usize,
    vectors: Vec<Vec<u8>>,
}

#[derive(Deserialize)]
struct RawBoolean {
    atoms: usize,
    elements: Vec<Vec<usize>>,
}

fn parse_data<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::MalformedStructure(e.to_string()))
}

impl TryFrom<RawStructure> for FinStructure {
    type Error = Error;

    fn try_from(raw: RawStructure) -> Result<FinStructure> {
        let n = raw.points.len();
        let pos: HashMap<&str, usize> = raw.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let lookup = |p: &str| {
            pos.get(p)
                .copied()
                .ok_or_else(|| Error::MalformedStructure(format!("unknown point `{p}`")))
        };
        let mut class: ClassId = raw.class.parse().map_err(|_| {
            Error::MalformedStructure(format!("unknown class `{}`", raw.class))
        })?;
        let data = match class {
            ClassId::PureSet => Payload::Set,
            ClassId::LinearOrder => {
                let o: RawOrder = parse_data(raw.data)?;
                if o.order.len() != n {
                    return Err(Error::MalformedStructure("order must list every point once".into()));
                }
                let mut rank = vec![usize::MAX; n];
                for (r, p) in o.order.iter().enumerate() {
                    let i = lookup(p)?;
                    if rank[i] != usize::MAX {
                        return Err(Error::MalformedStructure(format!("point `{p}` listed twice")));
                    }
                    rank[i] = r;
                }
                Payload::Order { rank }
            }
            ClassId::Graph => {
                let g: RawGraph = parse_data(raw.data)?;
                if n > 64 {
                    return Err(Error::MalformedStructure("graphs are limited to 64 points".into()));
                }
                let mut adjacency = vec![0u64; n];
                for (a, b) in &g.edges {
                    let (a, b) = (lookup(a)?, lookup(b)?);
                    if a == b {
                        return Err(Error::MalformedStructure("graph edge is a loop".into()));
                    }
                    adjacency[a] |= 1 << b;
                    adjacency[b] |= 1 << a;
                }
                Payload::Graph { adjacency }
            }
            ClassId::VectorSpace { .. } => {
                let v: RawVector = parse_data(raw.data)?;
                class = ClassId::VectorSpace { q: v.q };
                Payload::Vector {
                    q: v.q,
                    dim: v.dim,
                    vectors: v.vectors,
                }
            }
            ClassId::BooleanAlgebra => {
                let b: RawBoolean = parse_data(raw.data)?;
                if b.atoms == 0 || b.atoms > 63 {
                    return Err(Error::MalformedStructure(format!("unsupported atom count {}", b.atoms)));
                }
                let mut elements = Vec::with_capacity(b.elements.len());
                for list in &b.elements {
                    let mut m = 0u64;
                    for &a in list {
                        if a >= b.atoms {
                            return Err(Error::MalformedStructure(format!("atom index {a} out of range")));
                        }
                        m |= 1 << a;
                    }
                    elements.push(m);
                }
                Payload::Boolean {
                    atoms: b.atoms,
                    elements,
                }
            }
        };
        let s = FinStructure {
            class,
            points: raw.points,
            data,
        };
        s.check_shape()?;
        Ok(s)
    }
}

impl Serialize for FinStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinStructure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        FinStructure::from_json_value(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let samples = vec![
            FinStructure::pure_set(3),
            FinStructure::chain(4).permuted(&[2, 0, 3, 1]),
            FinStructure::graph(4, &[(0, 1), (1, 2), (2, 3)]),
            FinStructure::vectors(3, 2, vec![vec![0, 0], vec![1, 2], vec![2, 1]]),
            FinStructure::boolean(2, vec![0, 1, 2, 3]),
        ];
        for s in samples {
            let text = serde_json::to_string(&s).unwrap();
            let back: FinStructure = serde_json::from_str(&text).unwrap();
            assert_eq!(back, s, "{text}");
        }
    }

    #[test]
    fn rejects_malformed() {
        let loop_edge = r#"{"class":"graph","points":["a"],"data":{"edges":[["a","a"]]}}"#;
        assert!(FinStructure::from_json(loop_edge).is_err());
        let dup = r#"{"class":"vector_space","points":["a","b"],"data":{"q":2,"dim":1,"vectors":[[1],[1]]}}"#;
        assert!(FinStructure::from_json(dup).is_err());
        let bad_order = r#"{"class":"linear_order","points":["a","b"],"data":{"order":["a"]}}"#;
        assert!(FinStructure::from_json(bad_order).is_err());
        let unknown = r#"{"class":"ring","points":[],"data":{}}"#;
        assert!(FinStructure::from_json(unknown).is_err());
    }

    #[test]
    fn induced_order_reranks() {
        let s = FinStructure::chain(5);
        let sub = s.induced(&[4, 1, 3]);
        assert_eq!(sub.data, Payload::Order { rank: vec![2, 0, 1] });
    }
}
