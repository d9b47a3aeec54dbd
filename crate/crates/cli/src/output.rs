//! Output sinks and float formatting.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use greensign::Error;

/// Stdout when `path` is `None`.
pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn finite(x: f64, what: &str) -> Result<f64, Error> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(format!("{what} = {x}")))
    }
}

pub fn all_finite<'a>(xs: impl IntoIterator<Item = &'a f64>, what: &str) -> Result<(), Error> {
    xs.into_iter()
        .try_for_each(|&x| finite(x, what).map(|_| ()))
}
