//! Principal eigenvalues on single triangles of diameter 1 and the
//! interpolation constants `C_s = lambda_min^{-1/2}` derived from them.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::afem::{afem_loop, AfemConfig, LevelRecord, SpaceChoice, TriangleSpace};
use crate::error::{Error, Result};
use crate::mesh::DomainKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleShape {
    Equilateral,
    RightIsosceles,
    /// Hypotenuse 1.
    Deg906030,
}

impl TriangleShape {
    pub const ALL: [TriangleShape; 3] = [TriangleShape::Equilateral, TriangleShape::RightIsosceles, TriangleShape::Deg906030];

    pub fn domain(self) -> DomainKind {
        match self {
            TriangleShape::Equilateral => DomainKind::TriEquilateral,
            TriangleShape::RightIsosceles => DomainKind::TriRightIsosceles,
            TriangleShape::Deg906030 => DomainKind::Tri906030,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TriangleShape::Equilateral => "equilateral",
            TriangleShape::RightIsosceles => "right-isosceles",
            TriangleShape::Deg906030 => "90-60-30",
        }
    }
}

impl std::str::FromStr for TriangleShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TriangleShape::ALL
            .into_iter()
            .find(|t| t.name() == s || t.domain().name() == s)
            .ok_or_else(|| Error::UnknownDomain(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstantsSpec {
    pub shape: TriangleShape,
    pub space: TriangleSpace,
    /// Mass form `b_s`.
    pub form: u8,
}

impl ConstantsSpec {
    pub fn new(shape: TriangleShape, space: TriangleSpace, form: u8) -> Self {
        ConstantsSpec { shape, space, form }
    }

    /// All 24 combinations, ordered by form, space, shape.
    pub fn all() -> Vec<ConstantsSpec> {
        let mut v = Vec::with_capacity(24);
        for form in 0..2 {
            for space in TriangleSpace::ALL {
                for shape in TriangleShape::ALL {
                    v.push(ConstantsSpec { shape, space, form });
                }
            }
        }
        v
    }

    pub fn afem_config(&self, max_ndof: usize) -> AfemConfig {
        AfemConfig {
            space: SpaceChoice::Triangle(self.space),
            form: self.form,
            j: 1,
            max_ndof,
            ..AfemConfig::new(self.shape.domain())
        }
    }
}

/// Default AFEM budget for the triangle runs.
pub const DEFAULT_BUDGET: usize = 8_000;

/// Smallest eigenvalue of `(D^2 u, D^2 v) = lambda b_s(u, v)` on the
/// constrained space, with the record trail of the adaptive run.
pub fn principal_eigenvalue(spec: &ConstantsSpec, max_ndof: usize) -> Result<(f64, Vec<LevelRecord>)> {
    let run = afem_loop(&spec.afem_config(max_ndof))?;
    Ok((run.pair.value, run.records))
}

/// `C_s` from `lambda_min = (C_s h^s)^{-2}` with `h = 1`.
pub fn interpolation_constant(lambda_min: f64, s: u8) -> Result<f64> {
    if s > 1 {
        return Err(Error::InvalidInput(format!("form index {s} not in {{0, 1}}")));
    }
    if !(lambda_min > 0.0) {
        return Err(Error::NonPositiveEigenvalue(lambda_min));
    }
    Ok(lambda_min.powf(-0.5))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsEntry {
    pub spec: ConstantsSpec,
    pub lambda: f64,
    pub ndof: usize,
}

/// Principal eigenvalues for all 24 specs, computed concurrently.
pub fn constants_table(max_ndof: usize) -> Result<Vec<ConstantsEntry>> {
    ConstantsSpec::all()
        .into_par_iter()
        .map(|spec| {
            let (lambda, records) = principal_eigenvalue(&spec, max_ndof)?;
            Ok(ConstantsEntry { spec, lambda, ndof: records.last().map_or(0, |r| r.ndof) })
        })
        .collect()
}

/// One row per form and space, one column per shape.
pub fn table_csv(entries: &[ConstantsEntry]) -> String {
    let mut s = String::from("s,space");
    for shape in TriangleShape::ALL {
        write!(s, ",{}", shape.name()).unwrap();
    }
    s.push('\n');
    for form in 0..2 {
        for space in TriangleSpace::ALL {
            write!(s, "{form},{}", space.code()).unwrap();
            for shape in TriangleShape::ALL {
                match entries.iter().find(|e| e.spec == ConstantsSpec { shape, space, form }) {
                    Some(e) => write!(s, ",{:.15e}", e.lambda).unwrap(),
                    None => s.push(','),
                }
            }
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_from_eigenvalues() {
        assert_eq!(interpolation_constant(1.0, 0).unwrap(), 1.0);
        let c0 = interpolation_constant(185.10778102243532, 0).unwrap();
        assert!((c0 - 0.07350005475651561).abs() < 1e-10);
        let c1 = interpolation_constant(36.63077785104390, 1).unwrap();
        assert!((c1 - 0.16522544473105152).abs() < 1e-10);
        assert_eq!(interpolation_constant(0.0, 0), Err(Error::NonPositiveEigenvalue(0.0)));
        assert!(interpolation_constant(1.0, 2).is_err());
    }

    #[test]
    fn spec_enumeration() {
        let all = ConstantsSpec::all();
        assert_eq!(all.len(), 24);
        let uniq: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(uniq.len(), 24);
        assert_eq!("90-60-30".parse::<TriangleShape>().unwrap(), TriangleShape::Deg906030);
        assert_eq!("tri-equilateral".parse::<TriangleShape>().unwrap(), TriangleShape::Equilateral);
        assert!("square".parse::<TriangleShape>().is_err());
    }

    #[test]
    fn csv_layout() {
        let e = ConstantsEntry { spec: ConstantsSpec::new(TriangleShape::RightIsosceles, TriangleSpace::VertexValues, 1), lambda: 2.0, ndof: 1 };
        let csv = table_csv(&[e]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "s,space,equilateral,right-isosceles,90-60-30");
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[7], "1,V,,2.000000000000000e0,");
    }

    #[test]
    fn coarse_nesting() {
        // more constraints cannot lower the minimum of the Rayleigh quotient
        for form in 0..2 {
            let v = principal_eigenvalue(&ConstantsSpec::new(TriangleShape::Equilateral, TriangleSpace::VertexValues, form), 300).unwrap().0;
            let m = principal_eigenvalue(&ConstantsSpec::new(TriangleShape::Equilateral, TriangleSpace::VertexAndEdgeMeans, form), 300)
                .unwrap()
                .0;
            assert!(m >= v, "form {form}: {m} < {v}");
        }
    }
}
