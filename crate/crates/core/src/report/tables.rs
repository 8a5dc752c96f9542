//! The six complexity tables, computed from live enumeration where possible.

use std::fmt::Write as _;

use serde::Serialize;

use crate::criteria::{criterion, cr_prime, BaseLinearCombination, BaseSet, Criterion, Domain};
use crate::error::{Error, Result};
use crate::ree_hoover::{rh_linear_combination, rh_reference_count, RhView, MAX_RH_ORDER};
use crate::report::reference::{published_table, PublishedTable, Series, FIRST_ORDER, LAST_ORDER};
use crate::trees::{tree_sum, Subset};

/// Box side used for the Ree-Hoover combinations; criteria do not depend on it.
pub const RH_BOX_SIDE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Computed,
    Reference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub n: usize,
    pub value: Option<u64>,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub label: String,
    pub series: Series,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub number: u8,
    pub title: String,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    pub n_max: usize,
    /// Ree-Hoover cells up to this order are enumerated; larger orders come
    /// from the reference counts.
    pub rh_enumerate_max: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            n_max: LAST_ORDER,
            rh_enumerate_max: MAX_RH_ORDER,
        }
    }
}

pub const FOOTNOTES: [&str; 2] = [
    "Ree-Hoover rows count nonisomorphic diagrams, while tree rows count classes of labeled trees.",
    "Cells marked * are published reference values; all other cells are computed.",
];

/// Tree-sum combinations for `n = 2..=n_max` of both subsets.
struct TreeCombinations {
    full: Vec<BaseLinearCombination>,
    a: Vec<BaseLinearCombination>,
}

impl TreeCombinations {
    fn build(n_max: usize) -> Result<Self> {
        let build = |subset| {
            (FIRST_ORDER..=n_max)
                .map(|n| Ok(tree_sum(n, subset, Domain::ImproperSpace)?.to_combination()))
                .collect::<Result<Vec<_>>>()
        };
        Ok(TreeCombinations {
            full: build(Subset::Full)?,
            a: build(Subset::ASubset)?,
        })
    }

    fn series(&self, s: Series) -> &[BaseLinearCombination] {
        match s {
            Series::TreeFull => &self.full,
            _ => &self.a,
        }
    }
}

fn tree_cell(
    combos: &[BaseLinearCombination],
    c: Criterion,
    primed: bool,
    n: usize,
) -> Result<u64> {
    let upto = &combos[..=n - FIRST_ORDER];
    if primed {
        cr_prime(c, &BaseSet::new(upto.to_vec())?)
    } else {
        criterion(c, &upto[n - FIRST_ORDER])
    }
}

fn rh_cell(c: Criterion, primed: bool, n: usize, opts: &TableOptions) -> Result<Cell> {
    if n <= opts.rh_enumerate_max.min(MAX_RH_ORDER) {
        let l = rh_linear_combination(n, RH_BOX_SIDE, RhView::Classes)?;
        let value = if primed {
            cr_prime(c, &BaseSet::new(vec![l])?)?
        } else {
            criterion(c, &l)?
        };
        return Ok(Cell {
            n,
            value: Some(value),
            source: Source::Computed,
        });
    }
    let count = rh_reference_count(n)?;
    let value = match c {
        Criterion::Cr1 => Some(count),
        Criterion::Cr2 => Some(count * (n * (n - 1) / 2) as u64),
        Criterion::Cr3 => None,
    };
    Ok(Cell {
        n,
        value,
        source: Source::Reference,
    })
}

fn build_one(published: &PublishedTable, trees: &TreeCombinations, opts: &TableOptions) -> Result<Table> {
    let prime = if published.primed { "'" } else { "" };
    let title = format!(
        "Table {} of complexity by the criterion Cr{}{}",
        published.number,
        prime,
        &published.criterion.name()[2..]
    );
    let mut rows = Vec::new();
    for row in published.rows {
        let mut cells = Vec::new();
        for n in FIRST_ORDER..=opts.n_max {
            let cell = match row.series {
                Series::TreeFull | Series::TreeA => Cell {
                    n,
                    value: Some(tree_cell(trees.series(row.series), published.criterion, published.primed, n)?),
                    source: Source::Computed,
                },
                Series::ReeHoover => rh_cell(published.criterion, published.primed, n, opts)?,
                Series::Frame => Cell {
                    n,
                    value: row.value(n),
                    source: Source::Reference,
                },
            };
            cells.push(cell);
        }
        rows.push(Row {
            label: row.label.to_string(),
            series: row.series,
            cells,
        });
    }
    Ok(Table {
        number: published.number,
        title,
        rows,
    })
}

/// Builds the requested tables (numbers 1 to 6) for `n = 2..=opts.n_max`.
pub fn build_tables(numbers: &[u8], opts: &TableOptions) -> Result<Vec<Table>> {
    Error::check_range("tables", opts.n_max, FIRST_ORDER, LAST_ORDER)?;
    let specs = numbers
        .iter()
        .map(|&k| published_table(k).ok_or(Error::range("table number", k as usize, 1, 6)))
        .collect::<Result<Vec<_>>>()?;
    let trees = TreeCombinations::build(opts.n_max)?;
    specs.into_iter().map(|s| build_one(s, &trees, opts)).collect()
}

/// `(table, row label, n, computed, published)`.
pub type Mismatch = (u8, String, usize, Option<u64>, Option<u64>);

/// Cells whose value differs from the published one.
pub fn mismatches(tables: &[Table]) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for t in tables {
        let published = published_table(t.number).expect("tables are built from published definitions");
        for (row, published_row) in t.rows.iter().zip(published.rows) {
            for cell in &row.cells {
                let expected = published_row.value(cell.n);
                if cell.value != expected {
                    out.push((t.number, row.label.clone(), cell.n, cell.value, expected));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Serialize)]
struct CsvRecord<'a> {
    table: u8,
    row: &'a str,
    n: usize,
    value: Option<u64>,
    source: Source,
}

pub fn render(tables: &[Table], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for t in tables {
                for row in &t.rows {
                    for cell in &row.cells {
                        w.serialize(CsvRecord {
                            table: t.number,
                            row: &row.label,
                            n: cell.n,
                            value: cell.value,
                            source: cell.source,
                        })
                        .map_err(|e| Error::Io(e.to_string()))?;
                    }
                }
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                tables: &'a [Table],
                footnotes: [&'static str; 2],
            }
            let doc = Doc {
                tables,
                footnotes: FOOTNOTES,
            };
            Ok(serde_json::to_string_pretty(&doc).expect("tables serialize") + "\n")
        }
        Format::Md => Ok(markdown(tables)),
    }
}

fn markdown(tables: &[Table]) -> String {
    let mut s = String::new();
    for t in tables {
        let orders: Vec<usize> = t.rows.first().map(|r| r.cells.iter().map(|c| c.n).collect()).unwrap_or_default();
        let _ = writeln!(s, "### {}\n", t.title);
        let _ = write!(s, "| n |");
        for n in &orders {
            let _ = write!(s, " {n} |");
        }
        let _ = write!(s, "\n|---|");
        for _ in &orders {
            let _ = write!(s, "---:|");
        }
        s.push('\n');
        for row in &t.rows {
            let _ = write!(s, "| {} |", row.label);
            for cell in &row.cells {
                match (cell.value, cell.source) {
                    (None, _) => s.push_str(" - |"),
                    (Some(v), Source::Computed) => {
                        let _ = write!(s, " {v} |");
                    }
                    (Some(v), Source::Reference) => {
                        let _ = write!(s, " {v}* |");
                    }
                }
            }
            s.push('\n');
        }
        s.push('\n');
    }
    for note in FOOTNOTES {
        let _ = writeln!(s, "{note}");
    }
    s
}
