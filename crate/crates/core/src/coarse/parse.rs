//! Text format: a header `n m`, then `m` edge lines `u v w`, then any number
//! of subset lines `H: v1 v2 …`. Vertices are 0-indexed; `w` is a decimal
//! or a fraction `p/q`. Blank lines and lines starting with `#` are skipped.

use super::{CoarseError, MetricGraph, SubsetFamily};

#[derive(Clone, Debug, PartialEq)]
pub struct GraphFile {
    pub graph: MetricGraph,
    pub family: SubsetFamily,
}

fn err(line: usize, message: impl Into<String>) -> CoarseError {
    CoarseError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_weight(tok: &str, line: usize) -> Result<f64, CoarseError> {
    let bad = || err(line, format!("invalid weight {tok:?}"));
    let w = match tok.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.parse().map_err(|_| bad())?;
            let q: f64 = q.parse().map_err(|_| bad())?;
            p / q
        }
        None => tok.parse().map_err(|_| bad())?,
    };
    if w.is_finite() && w > 0.0 {
        Ok(w)
    } else {
        Err(err(line, format!("weight {tok:?} must be positive")))
    }
}

fn parse_vertex(tok: &str, n: usize, line: usize) -> Result<usize, CoarseError> {
    let v: usize = tok
        .parse()
        .map_err(|_| err(line, format!("invalid vertex {tok:?}")))?;
    if v >= n {
        return Err(err(line, format!("vertex {v} out of range 0..{n}")));
    }
    Ok(v)
}

pub fn parse_graph(text: &str) -> Result<GraphFile, CoarseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header `n m`"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = head[..] else {
        return Err(err(hline, "header must be `n m`"));
    };
    let n: usize = n
        .parse()
        .map_err(|_| err(hline, format!("invalid vertex count {n:?}")))?;
    let m: usize = m
        .parse()
        .map_err(|_| err(hline, format!("invalid edge count {m:?}")))?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for k in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| err(last_line + 1, format!("expected {m} edges, found {k}")))?;
        last_line = ln;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [u, v, w] = toks[..] else {
            return Err(err(ln, "edge line must be `u v w`"));
        };
        let (u, v) = (parse_vertex(u, n, ln)?, parse_vertex(v, n, ln)?);
        if u == v {
            return Err(err(ln, format!("self-loop at {u}")));
        }
        edges.push((u, v, parse_weight(w, ln)?));
    }
    let mut subsets = Vec::new();
    for (ln, l) in lines {
        let rest = l
            .strip_prefix("H:")
            .ok_or_else(|| err(ln, "expected a subset line `H: v1 v2 …`"))?;
        let members = rest
            .split_whitespace()
            .map(|t| parse_vertex(t, n, ln))
            .collect::<Result<Vec<_>, _>>()?;
        if members.is_empty() {
            return Err(err(ln, "empty subset"));
        }
        subsets.push(members);
    }
    let graph = MetricGraph::new(n, &edges).map_err(|e| err(hline, e.to_string()))?;
    Ok(GraphFile {
        graph,
        family: SubsetFamily::new(subsets),
    })
}
