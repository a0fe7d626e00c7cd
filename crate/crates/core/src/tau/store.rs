//! Text persistence for tau tables.
//!
//! ```text
//! #tau-table v1 max=<N>
//! 1\t1
//! 2\t-24
//! ...
//! ```
//! One record per line, `n` ascending from 1, LF line endings.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{TauError, TauTable};

const HEADER_PREFIX: &str = "#tau-table v1 max=";

fn format_err(msg: impl Into<String>) -> TauError {
    TauError::Format(msg.into())
}

impl TauTable {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), TauError> {
        writeln!(w, "{HEADER_PREFIX}{}", self.max_n())?;
        for (n, v) in self.iter() {
            writeln!(w, "{n}\t{v}")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self, TauError> {
        let mut lines = r.split(b'\n');
        let header = lines
            .next()
            .ok_or_else(|| format_err("empty file"))??;
        let header = String::from_utf8(header).map_err(|_| format_err("header is not UTF-8"))?;
        let max_n: usize = header
            .strip_prefix(HEADER_PREFIX)
            .and_then(|rest| rest.parse().ok())
            .ok_or_else(|| format_err(format!("bad header {header:?}")))?;
        if max_n == 0 {
            return Err(format_err("max must be at least 1"));
        }

        let mut values = Vec::with_capacity(max_n + 1);
        values.push(BigInt::zero());
        for (i, line) in lines.enumerate() {
            let line = line?;
            let expected = i + 1;
            if line.is_empty() {
                return Err(format_err(format!("blank line at record {expected}")));
            }
            if expected > max_n {
                return Err(format_err(format!(
                    "more records than the header's max={max_n}"
                )));
            }
            let line = std::str::from_utf8(&line)
                .map_err(|_| format_err(format!("record {expected} is not UTF-8")))?;
            let (n, v) = line
                .split_once('\t')
                .ok_or_else(|| format_err(format!("record {expected}: missing tab")))?;
            let n: usize = n
                .parse()
                .map_err(|_| format_err(format!("record {expected}: bad index {n:?}")))?;
            if n != expected {
                return Err(format_err(format!("record {expected} has index {n}")));
            }
            let v = BigInt::from_str(v)
                .map_err(|_| format_err(format!("record {expected}: bad value {v:?}")))?;
            values.push(v);
        }
        if values.len() != max_n + 1 {
            return Err(format_err(format!(
                "header says max={max_n} but found {} records",
                values.len() - 1
            )));
        }
        if !values[1].is_one() {
            return Err(format_err("tau(1) must be 1"));
        }
        Ok(TauTable::from_values(values))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TauError> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TauError> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}
