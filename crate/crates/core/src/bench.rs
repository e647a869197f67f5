//! The benchmark runs behind the reference tables, and their comparison
//! against the embedded values.

use rayon::prelude::*;

use crate::afem::{afem_loop, AfemConfig};
use crate::constants::{interpolation_constant, principal_eigenvalue, ConstantsSpec};
use crate::error::{Error, Result};
use crate::mesh::{BoundaryCondition, BoundarySpec, DomainKind};
use crate::reference::{self, triangle_id};

/// Relative agreement required of every compared eigenvalue.
pub const REFCHECK_TOL: f64 = 1e-6;

/// Configurations whose eigenvalues are compared with benchmark `id`.
/// `drums-ss` runs on both drums.
pub fn benchmark_configs(id: &str, max_ndof: usize) -> Result<Vec<AfemConfig>> {
    let with = |domain, bc: Option<BoundaryCondition>| {
        let mut cfg = AfemConfig::new(domain);
        if let Some(bc) = bc {
            cfg.spec = BoundarySpec::uniform(bc);
        }
        cfg.max_ndof = max_ndof;
        cfg
    };
    let clamped = Some(BoundaryCondition::Clamped);
    Ok(match id {
        "square" => vec![with(DomainKind::Square, clamped)],
        "lshape" => vec![with(DomainKind::LShape, clamped)],
        "drums-ss" => vec![
            with(DomainKind::Drum1, Some(BoundaryCondition::SimplySupported)),
            with(DomainKind::Drum2, Some(BoundaryCondition::SimplySupported)),
        ],
        "drums-clamped-left" => vec![with(DomainKind::Drum1, clamped)],
        "drums-clamped-right" => vec![with(DomainKind::Drum2, clamped)],
        "rect-hole" => vec![with(DomainKind::RectHole, None)],
        _ => match triangle_spec(id) {
            Some(spec) => vec![spec.afem_config(max_ndof)],
            None => return Err(Error::InvalidInput(format!("benchmark `{id}` has no run"))),
        },
    })
}

fn triangle_spec(id: &str) -> Option<ConstantsSpec> {
    ConstantsSpec::all().into_iter().find(|s| triangle_id(s.shape.name(), s.space.code(), s.form) == id)
}

/// One compared value.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub passed: bool,
}

impl Check {
    pub fn rel_error(&self) -> f64 {
        (self.computed - self.reference).abs() / self.reference.abs()
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: computed {:.15e} reference {:.15e} rel.err {:.2e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.computed,
            self.reference,
            self.rel_error()
        )
    }
}

fn check(name: String, computed: f64, reference: f64) -> Check {
    let passed = (computed - reference).abs() <= REFCHECK_TOL * reference.abs();
    Check { name, computed, reference, passed }
}

/// Runs benchmark `id` and compares every tabulated eigenvalue it computes.
pub fn run_benchmark(id: &str, max_ndof: usize) -> Result<Vec<Check>> {
    let refs = reference::benchmark(id)?;
    if let Some(spec) = triangle_spec(id) {
        let lambda = principal_eigenvalue(&spec, max_ndof)?.0;
        return Ok(vec![check(id.to_string(), lambda, refs[0].value())]);
    }
    let mut checks = Vec::new();
    for cfg in benchmark_configs(id, max_ndof)? {
        let run = afem_loop(&cfg)?;
        let lambdas = &run.records.last().expect("a run has at least one level").lambdas;
        for (e, &l) in refs.iter().zip(lambdas) {
            checks.push(check(format!("{id} {} lambda_{}", cfg.domain, e.j), l, e.value()));
        }
    }
    Ok(checks)
}

/// Every benchmark with a run, in table order.
pub fn refcheck_ids() -> Vec<&'static str> {
    reference::benchmark_ids().filter(|id| !id.starts_with("constant-")).collect()
}

/// Runs all benchmarks (concurrently) and compares them with the tables.
pub fn refcheck(max_ndof: usize) -> Result<Vec<Check>> {
    let per: Vec<Result<Vec<Check>>> = refcheck_ids().into_par_iter().map(|id| run_benchmark(id, max_ndof)).collect();
    let mut all = Vec::new();
    for r in per {
        all.extend(r?);
    }
    // interpolation constants follow from the V_M eigenvalues
    for id in reference::benchmark_ids().filter(|id| id.starts_with("constant-")) {
        let rest = &id["constant-".len()..];
        let (s, shape) = (if rest.starts_with("c0") { 0 } else { 1 }, &rest[3..]);
        let tri = triangle_id(shape, 'M', s);
        if let Some(c) = all.iter().find(|c| c.name == tri) {
            let constant = interpolation_constant(c.computed, s)?;
            all.push(check(id.to_string(), constant, reference::value(id, 1)?));
        }
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_table_has_a_run() {
        for id in refcheck_ids() {
            assert!(!benchmark_configs(id, 100).unwrap().is_empty(), "{id}");
        }
        assert_eq!(benchmark_configs("drums-ss", 100).unwrap().len(), 2);
        assert!(benchmark_configs("constant-c0-equilateral", 100).is_err());
    }

    #[test]
    fn check_lines() {
        let c = check("x".into(), 1.0 + 1e-7, 1.0);
        assert!(c.passed);
        assert!(c.line().starts_with("PASS x:"));
        assert!(!check("y".into(), 1.1, 1.0).passed);
    }

    #[test]
    fn coarse_triangle_benchmark() {
        let c = run_benchmark("triangle-equilateral-V-s1", 400).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].rel_error() < 1e-3);
    }
}
