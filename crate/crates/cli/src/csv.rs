//! CSV output whose cells are numbers or one of a few fixed words.

use std::fmt::Write as _;

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Word(Word),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Word {
    Accept,
    Reject,
    Pass,
    Fail,
}

impl Word {
    pub fn as_str(self) -> &'static str {
        match self {
            Word::Accept => "accept",
            Word::Reject => "reject",
            Word::Pass => "pass",
            Word::Fail => "fail",
        }
    }

    pub fn verdict(pass: bool) -> Word {
        if pass {
            Word::Pass
        } else {
            Word::Fail
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<Word> for Cell {
    fn from(w: Word) -> Self {
        Cell::Word(w)
    }
}

/// Header plus rows, rendered with `.` decimals and LF line endings.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(invalid(format!(
                "row has {} cells, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        if let Some(Cell::Num(x)) = row.iter().find(|c| matches!(c, Cell::Num(x) if !x.is_finite())) {
            return Err(invalid(format!("non-finite value {x} in output")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = match c {
                    Cell::Num(x) => write!(out, "{}", x + 0.0),
                    Cell::Int(k) => write!(out, "{k}"),
                    Cell::Word(w) => write!(out, "{}", w.as_str()),
                };
            }
            out.push('\n');
        }
        out
    }
}

/// True when every cell below the header is a number or an allowed word.
pub fn cells_well_formed(csv: &str) -> bool {
    csv.lines().skip(1).all(|l| {
        l.split(',').all(|c| {
            matches!(c, "accept" | "reject" | "pass" | "fail")
                || c.parse::<f64>().map(|x| x.is_finite()).unwrap_or(false)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![0.5.into(), 3u64.into(), Word::Accept.into()]).unwrap();
        t.push(vec![(-0.0).into(), true.into(), Word::Fail.into()]).unwrap();
        assert_eq!(t.render(), "a,b,c\n0.5,3,accept\n0,1,fail\n");
        assert!(t.push(vec![f64::NAN.into(), 1u64.into(), 1u64.into()]).is_err());
        assert!(t.push(vec![1u64.into()]).is_err());
    }

    proptest! {
        #[test]
        fn numbers_roundtrip(x in proptest::num::f64::NORMAL | proptest::num::f64::ZERO | proptest::num::f64::SUBNORMAL) {
            let mut t = Table::new(&["x"]);
            t.push(vec![x.into()]).unwrap();
            let s = t.render();
            prop_assert!(cells_well_formed(&s));
            let back: f64 = s.lines().nth(1).unwrap().parse().unwrap();
            prop_assert_eq!(back, x + 0.0);
        }
    }
}
