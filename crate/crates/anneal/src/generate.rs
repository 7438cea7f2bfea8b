//! Problem instances written as term files with a JSON sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use anneal_core::problems::{gen_fim, gen_hw, gen_mqo, gen_sk, mqo_to_qubo, MqoInstance, SkDistribution, SkParams};
use anneal_core::{qubo_to_ising, serialize_hamiltonian, HamiltonianSpec};
use serde_json::{json, Value};

use crate::error::IoContext;
use crate::store::TOOL_VERSION;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Fim { n: usize, j: f64, h: f64 },
    Sk(SkParams),
    Hw { n: usize },
    Mqo { queries: usize, plans: usize, density: f64, seed: u64, penalty: Option<f64> },
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub spec: HamiltonianSpec,
    pub sidecar: Value,
    pub mqo: Option<MqoInstance>,
}

fn dist_name(d: SkDistribution) -> &'static str {
    match d {
        SkDistribution::Gaussian => "gaussian",
        SkDistribution::Uniform => "uniform",
    }
}

pub fn parse_distribution(s: &str) -> Option<SkDistribution> {
    match s {
        "gaussian" | "normal" => Some(SkDistribution::Gaussian),
        "uniform" => Some(SkDistribution::Uniform),
        _ => None,
    }
}

pub fn mqo_json(inst: &MqoInstance) -> Value {
    json!({
        "queries": inst.plans_per_query(),
        "costs": inst.costs(),
        "savings": inst.savings().iter().map(|(&(a, b), &s)| json!([a, b, s])).collect::<Vec<_>>(),
        "density": inst.density(),
    })
}

/// Builds the problem Hamiltonian. MQO instances are encoded as a QUBO whose
/// Ising form carries the constant offset, so energies at `s = 1` equal plan
/// costs.
pub fn generate(family: &Family) -> Result<Generated> {
    let (spec, params, mqo) = match family {
        Family::Fim { n, j, h } => (gen_fim(*n, *j, *h)?, json!({"family": "fim", "n": n, "J": j, "h": h}), None),
        Family::Sk(p) => (
            gen_sk(p)?,
            json!({
                "family": "sk", "n": p.n, "seed": p.seed, "distribution": dist_name(p.distribution),
                "field_scale": p.field_scale, "pin": p.pin,
            }),
            None,
        ),
        Family::Hw { n } => (gen_hw(*n)?, json!({"family": "hw", "n": n}), None),
        Family::Mqo { queries, plans, density, seed, penalty } => {
            let inst = gen_mqo(*queries, *plans, *density, *seed)?;
            let (ising, offset) = qubo_to_ising(&mqo_to_qubo(&inst, *penalty)?)?;
            let total = ising.constant_offset() + offset;
            let params = json!({
                "family": "mqo", "queries": queries, "plans": plans, "density": density,
                "seed": seed, "penalty": penalty, "instance": mqo_json(&inst),
            });
            (ising.with_offset(total), params, Some(inst))
        }
    };
    let mut sidecar = params;
    let obj = sidecar.as_object_mut().expect("object");
    obj.insert("n_qubits".into(), json!(spec.n_qubits()));
    obj.insert("constant_offset".into(), json!(spec.constant_offset()));
    obj.insert("tool_version".into(), json!(TOOL_VERSION));
    Ok(Generated { spec, sidecar, mqo })
}

/// Sidecar path: the term file name with `.meta.json` appended.
pub fn sidecar_path(term_file: &Path) -> PathBuf {
    let mut name = term_file.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    term_file.with_file_name(name)
}

pub fn write_generated(g: &Generated, term_file: &Path) -> Result<PathBuf> {
    if let Some(dir) = term_file.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).at(dir)?;
    }
    fs::write(term_file, serialize_hamiltonian(&g.spec)).at(term_file)?;
    let side = sidecar_path(term_file);
    let text = serde_json::to_string_pretty(&g.sidecar).map_err(|source| Error::Meta { path: side.clone(), source })?;
    fs::write(&side, text + "\n").at(&side)?;
    Ok(side)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hw_sidecar_offset() {
        let g = generate(&Family::Hw { n: 5 }).unwrap();
        assert_eq!(g.spec.terms().len(), 5);
        assert_eq!(g.sidecar["constant_offset"], json!(2.5));
    }

    #[test]
    fn mqo_pair_count() {
        let g = generate(&Family::Mqo { queries: 4, plans: 2, density: 0.36, seed: 1, penalty: None }).unwrap();
        assert_eq!(g.spec.n_qubits(), 8);
        assert_eq!(g.sidecar["instance"]["savings"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("a/b/sk.txt")), PathBuf::from("a/b/sk.txt.meta.json"));
    }
}
