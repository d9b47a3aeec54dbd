use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use greensign::assembly::{assemble_matrix, singularity_scale, BaseKernel};
use greensign::{Error, Family};
use nalgebra::DMatrix;
use serde_json::json;

use crate::config::Settings;
use crate::output::{all_finite, open};
use crate::{code, ParamArgs};

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// `reflection` (default) or `ode`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

fn rows(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    a.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn run(args: &MatrixArgs, s: &Settings) -> Result<u8> {
    let family: Family = s.parsed("family", args.family.as_deref(), Family::Reflection)?;
    let params = args.params.params(s)?;
    let q = args.params.quadrature(s)?;
    let base = BaseKernel::for_family(family, params.m, params.horizon)?;
    let (_, a) = assemble_matrix(params, &base, &q)?;
    all_finite(a.iter(), "matrix entry")?;
    let det = a.clone().lu().determinant();
    let scale = singularity_scale(&a);
    let singular = det.abs() < 1e-8 * scale;
    let inverse = if singular {
        None
    } else {
        a.clone().lu().try_inverse()
    };
    if let Some(inv) = &inverse {
        all_finite(inv.iter(), "inverse entry")?;
    }
    let doc = json!({
        "size": a.nrows(),
        "A": rows(&a),
        "A_inv": inverse.as_ref().map(rows),
        "det": det,
    });
    let mut w = open(args.output.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    if inverse.is_none() {
        let err = Error::SingularMatrix {
            det,
            m: params.m,
            big_m: params.big_m,
        };
        eprintln!("error: {err} (|det| / scale = {:e})", det.abs() / scale);
        return Ok(code::SINGULAR_MATRIX);
    }
    Ok(code::OK)
}
