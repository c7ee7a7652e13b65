//! Resolution of textual arguments into core values.

use std::fs;
use std::path::Path;

use gfs_core::coeff::coefficients;
use gfs_core::multiplier::Polynomial;
use gfs_core::sequence::parse_number_list;
use gfs_core::{
    catalog_function, BVFunction, Basis, MultiplierSeq, SequenceA, SystemId, Weighting,
};

use crate::{Failure, Outcome};

fn read(path: &str) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
}

/// `table:@file` → `table:<file contents>`.
fn expand_table(spec: &str) -> Outcome<String> {
    match spec.strip_prefix("table:@") {
        Some(path) => Ok(format!("table:{}", read(path)?.trim())),
        None => Ok(spec.to_string()),
    }
}

/// Catalog name, inline JSON object, or `@path.json`; returns a display name too.
pub fn function(spec: &str) -> Outcome<(String, BVFunction)> {
    let parse = |text: &str| {
        serde_json::from_str::<BVFunction>(text)
            .map_err(|e| Failure::Usage(format!("function JSON: {e}")))
    };
    if let Some(path) = spec.strip_prefix('@') {
        let name = Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        return Ok((name, parse(&read(path)?)?));
    }
    if spec.trim_start().starts_with('{') {
        return Ok(("inline".into(), parse(spec)?));
    }
    catalog_function(spec)
        .map(|f| (spec.to_string(), f))
        .ok_or_else(|| Failure::Usage(format!("unknown catalog function {spec:?}")))
}

pub fn multiplier(spec: &str) -> Outcome<MultiplierSeq> {
    Ok(expand_table(spec)?.parse()?)
}

pub fn sequence(spec: &str, seed: u64, alpha: f64, len: usize) -> Outcome<SequenceA> {
    if spec == "random" {
        return Ok(SequenceA::seeded_random(seed, alpha, len)?);
    }
    if let Some(k) = spec.strip_prefix("unit:") {
        let k = k
            .parse()
            .map_err(|_| Failure::Usage(format!("bad unit index in {spec:?}")))?;
        return Ok(SequenceA::unit_basis(k, len)?);
    }
    if spec.starts_with("table:") {
        let expanded = expand_table(spec)?;
        let values = parse_number_list(&expanded["table:".len()..])?;
        if values.len() < len {
            return Err(Failure::Usage(format!(
                "table has {} entries, need {len}",
                values.len()
            )));
        }
        return Ok(SequenceA::table(values));
    }
    Err(Failure::Usage(format!("unknown sequence {spec:?}")))
}

/// `phi:k` → φ_k; `pn:m` → P_m with d ≡ 1 and a = (C_1(f), …, C_m(f)).
pub fn integrand(spec: &str, f: &BVFunction, system: SystemId) -> Outcome<Polynomial> {
    let bad = || Failure::Usage(format!("integrand must be phi:k or pn:m, got {spec:?}"));
    let (kind, k) = spec.split_once(':').ok_or_else(bad)?;
    let k: usize = k.parse().map_err(|_| bad())?;
    match kind {
        "phi" => Ok(Polynomial::new(vec![system.element(k)?], vec![1.0])),
        "pn" => {
            let c = coefficients(f, &system, k)?;
            Ok(Polynomial::pn(&system, &Weighting::unit(), &c, k)?)
        }
        _ => Err(bad()),
    }
}
