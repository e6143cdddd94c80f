//! The small-q table: ranges of the aggregated intersection numbers over
//! triangles and over paths, in aligned text and TSV.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::paley::{Paley, Shape};

/// Inclusive range of observed values, printed as `lo` or `lo-hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange {
    pub lo: u32,
    pub hi: u32,
}

impl ValueRange {
    fn point(v: u32) -> Self {
        ValueRange { lo: v, hi: v }
    }

    fn widen(&mut self, v: u32) {
        self.lo = self.lo.min(v);
        self.hi = self.hi.max(v);
    }
}

impl fmt::Display for ValueRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}-{}", self.lo, self.hi)
        }
    }
}

impl FromStr for ValueRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.parse::<u32>().map_err(|e| format!("bad value {t:?}: {e}"));
        match s.split_once('-') {
            Some((lo, hi)) => Ok(ValueRange { lo: num(lo)?, hi: num(hi)? }),
            None => num(s).map(ValueRange::point),
        }
    }
}

/// One table line: `[1 1 1]`, `[1 1 2]`, `[1 2 2]`, `[2 2 2]` ranges for
/// one shape, or `None` when no triple has that shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub q: u32,
    pub shape: Shape,
    pub cells: Option<[ValueRange; 4]>,
}

const COLUMNS: [&str; 4] = ["[1 1 1]", "[1 1 2]", "[1 2 2]", "[2 2 2]"];

/// Triangle and path rows for Paley(q).
pub fn table_rows(q: u32) -> Result<[TableRow; 2]> {
    let g = Paley::of_order(q)?;
    let scan = g.canonical_scan();
    let row = |shape: Shape| {
        let mut cells: Option<[ValueRange; 4]> = None;
        for t in scan.iter().filter(|t| t.shape == shape) {
            let agg = g.canonical_profile(t).aggregate.as_array();
            match &mut cells {
                None => cells = Some(agg.map(ValueRange::point)),
                Some(c) => c.iter_mut().zip(agg).for_each(|(r, v)| r.widen(v)),
            }
        }
        TableRow { q, shape, cells }
    };
    Ok([row(Shape::Triangle), row(Shape::Path)])
}

pub fn build_table(qs: &[u32]) -> Result<Vec<TableRow>> {
    let mut rows = Vec::with_capacity(2 * qs.len());
    for &q in qs {
        rows.extend(table_rows(q)?);
    }
    Ok(rows)
}

fn cell_strings(row: &TableRow) -> [String; 4] {
    match &row.cells {
        Some(c) => c.map(|r| r.to_string()),
        None => std::array::from_fn(|_| "-".to_string()),
    }
}

/// Aligned text: the order is printed on the triangle line only.
pub fn format_text(rows: &[TableRow]) -> String {
    let mut out = format!("{:<5}", "q");
    for c in COLUMNS {
        out += &format!("  {c:<7}");
    }
    let mut lines = vec![out.trim_end().to_string()];
    lines.push("-".repeat(5 + 4 * 9));
    for row in rows {
        let label = match row.shape {
            Shape::Triangle => row.q.to_string(),
            _ => String::new(),
        };
        let mut line = format!("{label:<5}");
        for c in cell_strings(row) {
            line += &format!("  {c:<7}");
        }
        lines.push(line.trim_end().to_string());
    }
    lines.join("\n") + "\n"
}

pub fn format_tsv(rows: &[TableRow]) -> String {
    let mut out = String::from("# q\tshape\tn111\tn112\tn122\tn222\n");
    for row in rows {
        out += &format!("{}\t{}\t{}\n", row.q, row.shape, cell_strings(row).join("\t"));
    }
    out
}

pub fn parse_tsv(text: &str) -> Result<Vec<TableRow>, String> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 6 {
                return Err(format!("expected 6 fields: {line:?}"));
            }
            let q = f[0].parse().map_err(|e| format!("bad q {:?}: {e}", f[0]))?;
            let shape = match f[1] {
                "triangle" => Shape::Triangle,
                "path" => Shape::Path,
                "copath" => Shape::Copath,
                "cotriangle" => Shape::Cotriangle,
                other => return Err(format!("unknown shape {other:?}")),
            };
            let cells = if f[2..].iter().all(|&c| c == "-") {
                None
            } else {
                let mut c = [ValueRange::point(0); 4];
                for (slot, s) in c.iter_mut().zip(&f[2..]) {
                    *slot = s.parse()?;
                }
                Some(c)
            };
            Ok(TableRow { q, shape, cells })
        })
        .collect()
}
