use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// A material coefficient such as the conductivity `sigma` or reluctivity `nu`,
/// with explicit positive bounds `lower <= value(x) <= upper`.
#[derive(Clone)]
pub enum CoefficientField {
    Constant(f64),
    Variable {
        value: ScalarFn,
        lower: f64,
        upper: f64,
    },
}

impl fmt::Debug for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Constant(c) => write!(f, "Constant({c})"),
            CoefficientField::Variable { lower, upper, .. } => {
                write!(f, "Variable {{ lower: {lower}, upper: {upper} }}")
            }
        }
    }
}

impl CoefficientField {
    pub fn constant(value: f64) -> Result<Self> {
        let field = CoefficientField::Constant(value);
        field.check_bounds()?;
        Ok(field)
    }

    pub fn variable(
        value: impl Fn(Point) -> f64 + Send + Sync + 'static,
        lower: f64,
        upper: f64,
    ) -> Result<Self> {
        let field = CoefficientField::Variable {
            value: Arc::new(value),
            lower,
            upper,
        };
        field.check_bounds()?;
        Ok(field)
    }

    #[inline]
    pub fn value(&self, x: Point) -> f64 {
        match self {
            CoefficientField::Constant(c) => *c,
            CoefficientField::Variable { value, .. } => value(x),
        }
    }

    pub fn lower(&self) -> f64 {
        match self {
            CoefficientField::Constant(c) => *c,
            CoefficientField::Variable { lower, .. } => *lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match self {
            CoefficientField::Constant(c) => *c,
            CoefficientField::Variable { upper, .. } => *upper,
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            CoefficientField::Constant(c) => Some(*c),
            CoefficientField::Variable { .. } => None,
        }
    }

    fn check_bounds(&self) -> Result<()> {
        let (lo, hi) = (self.lower(), self.upper());
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi < lo {
            return Err(Error::InvalidCoefficient(format!(
                "bounds must satisfy 0 < lower <= upper, got [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    /// Checks the bounds and samples the field at every node and centroid.
    pub fn validate_on(&self, mesh: &Mesh) -> Result<()> {
        self.check_bounds()?;
        if let CoefficientField::Variable {
            value,
            lower,
            upper,
        } = self
        {
            let centroids = (0..mesh.num_triangles()).map(|t| mesh.centroid(t));
            for x in mesh.nodes().iter().copied().chain(centroids) {
                let v = value(x);
                if !(v >= *lower && v <= *upper) {
                    return Err(Error::InvalidCoefficient(format!(
                        "value {v} at ({}, {}) outside [{lower}, {upper}]",
                        x[0], x[1]
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_are_enforced() {
        assert!(CoefficientField::constant(0.0).is_err());
        assert!(CoefficientField::constant(-1.0).is_err());
        assert!(CoefficientField::variable(|_| 1.0, 2.0, 1.0).is_err());
        let c = CoefficientField::constant(2.5).unwrap();
        assert_eq!((c.lower(), c.upper(), c.value([0.3, 0.1])), (2.5, 2.5, 2.5));
    }

    #[test]
    fn sampling_detects_violations() {
        let mesh = Mesh::uniform(4).unwrap();
        let ok = CoefficientField::variable(|x| 1.0 + x[0], 1.0, 2.0).unwrap();
        assert!(ok.validate_on(&mesh).is_ok());
        let bad = CoefficientField::variable(|x| 1.0 + x[0], 1.0, 1.5).unwrap();
        assert!(bad.validate_on(&mesh).is_err());
    }
}
