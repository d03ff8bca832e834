//! Finite magmas given by operation tables, with the unit at index 0.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::error::{LalgError, Result};

/// An `n × n` operation table over the indices `0..n`.
///
/// Row `i` lists `x_i · x_j` for `j = 0..n`, so row `i` is the left
/// multiplication map of `x_i`. Index 0 is the logical unit. Construction only
/// checks shape and range; the L-algebra axioms are checked by
/// [`crate::validate`].
///
/// Equality, ordering and hashing ignore display names.
#[derive(Clone)]
pub struct AlgebraTable {
    n: usize,
    cells: Vec<usize>,
    names: Option<Vec<String>>,
}

impl AlgebraTable {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(LalgError::MalformedTable("table has no rows".into()));
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(LalgError::MalformedTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v >= n {
                    return Err(LalgError::MalformedTable(format!(
                        "entry ({i},{j}) = {v} is out of range for n = {n}"
                    )));
                }
                cells.push(v);
            }
        }
        Ok(AlgebraTable {
            n,
            cells,
            names: None,
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(rows)
    }

    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<usize>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        debug_assert!(cells.iter().all(|&v| v < n));
        AlgebraTable {
            n,
            cells,
            names: None,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(LalgError::MalformedTable(format!(
                "{} names for {} elements",
                names.len(),
                self.n
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    /// The one-element algebra.
    pub fn trivial() -> Self {
        Self::from_cells_unchecked(1, vec![0])
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    /// `x · y`.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.cells[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => format!("x{x}"),
        }
    }

    pub fn check_index(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(LalgError::IndexOutOfRange { index: x, n: self.n })
        }
    }

    pub fn check_set(&self, s: &ElemSet) -> Result<()> {
        match s.iter().find(|&x| x >= self.n) {
            Some(x) => Err(LalgError::IndexOutOfRange { index: x, n: self.n }),
            None => Ok(()),
        }
    }

    /// `x ≤ y` in the natural order, i.e. `x · y = 1`.
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.op(x, y) == 0
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    /// Relabels the table by `perm`, which sends old index `i` to new index
    /// `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> AlgebraTable {
        let n = self.n;
        let mut cells = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[perm[i] * n + perm[j]] = perm[self.op(i, j)];
            }
        }
        let names = self.names.as_ref().map(|names| {
            let mut out = vec![String::new(); n];
            for (i, name) in names.iter().enumerate() {
                out[perm[i]] = name.clone();
            }
            out
        });
        AlgebraTable { n, cells, names }
    }

    /// Whether `s` is closed under the operation.
    pub fn is_closed(&self, s: &ElemSet) -> bool {
        s.iter()
            .all(|x| s.iter().all(|y| s.contains(self.op(x, y))))
    }

    /// Restriction of the operation to a closed subset containing the unit.
    /// Returns the subalgebra table and the embedding (new index → old index),
    /// which preserves the relative order of indices.
    pub fn subalgebra(&self, s: &ElemSet) -> Result<(AlgebraTable, Vec<usize>)> {
        self.check_set(s)?;
        if !s.contains(0) {
            return Err(LalgError::MalformedTable(
                "subalgebra must contain the unit".into(),
            ));
        }
        if !self.is_closed(s) {
            return Err(LalgError::MalformedTable(format!(
                "{s:?} is not closed under the operation"
            )));
        }
        let embed: Vec<usize> = s.to_vec();
        let mut back = vec![usize::MAX; self.n];
        for (new, &old) in embed.iter().enumerate() {
            back[old] = new;
        }
        let m = embed.len();
        let cells = (0..m * m)
            .map(|k| back[self.op(embed[k / m], embed[k % m])])
            .collect();
        let mut sub = AlgebraTable::from_cells_unchecked(m, cells);
        if let Some(names) = &self.names {
            sub.names = Some(embed.iter().map(|&i| names[i].clone()).collect());
        }
        Ok((sub, embed))
    }

    // ---- text format v1 -------------------------------------------------

    /// Serializes to the text format: the size on the first line, then one
    /// line of space-separated indices per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses exactly one table from text; trailing content is an error.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let table = parse_table_block(&mut lines)?;
        if let Some((no, _)) = lines.next() {
            return Err(LalgError::Parse(format!(
                "unexpected content after table at line {no}"
            )));
        }
        Ok(table)
    }

    /// Parses a stream of tables, as produced by the enumerator.
    pub fn parse_stream(text: &str) -> Result<Vec<Self>> {
        let mut lines = content_lines(text).peekable();
        let mut out = Vec::new();
        while lines.peek().is_some() {
            out.push(parse_table_block(&mut lines)?);
        }
        Ok(out)
    }

    pub fn write_stream(tables: &[AlgebraTable]) -> String {
        tables
            .iter()
            .map(|t| t.to_text())
            .collect::<Vec<_>>()
            .join("\n")
    }

    // ---- JSON mirror ----------------------------------------------------

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LalgError::Parse(e.to_string()))
    }

    /// Accepts either the text format or the JSON mirror.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_indices(no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| LalgError::Parse(format!("line {no}: bad index `{tok}`")))
        })
        .collect()
}

pub(crate) fn parse_table_block<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<AlgebraTable> {
    let (no, first) = lines
        .next()
        .ok_or_else(|| LalgError::Parse("missing table size".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| LalgError::Parse(format!("line {no}: expected table size, got `{first}`")))?;
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let (no, line) = lines
            .next()
            .ok_or_else(|| LalgError::Parse(format!("table truncated after {r} of {n} rows")))?;
        rows.push(parse_indices(no, line)?);
    }
    AlgebraTable::new(rows)
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl Serialize for AlgebraTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableJson {
            n: self.n,
            table: self.rows(),
            names: self.names.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TableJson::deserialize(d)?;
        if raw.table.len() != raw.n {
            return Err(serde::de::Error::custom(format!(
                "n = {} but table has {} rows",
                raw.n,
                raw.table.len()
            )));
        }
        let t = AlgebraTable::new(raw.table).map_err(serde::de::Error::custom)?;
        match raw.names {
            Some(names) => t.with_names(names).map_err(serde::de::Error::custom),
            None => Ok(t),
        }
    }
}

impl PartialEq for AlgebraTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cells == other.cells
    }
}

impl Eq for AlgebraTable {}

impl Hash for AlgebraTable {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.cells.hash(state);
    }
}

impl Ord for AlgebraTable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.cells.cmp(&other.cells))
    }
}

impl PartialOrd for AlgebraTable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AlgebraTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraTable({}; {:?})", self.n, self.rows())
    }
}

impl fmt::Display for AlgebraTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
