use super::sector::{Ket, Sector};
use crate::{Error, Result, C64};

/// Complex amplitudes over a [`Sector`] position basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    sector: Sector,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn zeros(sector: Sector) -> Self {
        StateVector { sector, amplitudes: vec![C64::new(0.0, 0.0); sector.dim()] }
    }

    /// The unit position ket `|[n]>` or `|[n1, n2]>`.
    pub fn basis(sector: Sector, ket: Ket) -> Result<Self> {
        let index = sector.index(ket).ok_or_else(|| Error::domain(format!("{ket:?} is not a ket of {sector:?}")))?;
        let mut psi = Self::zeros(sector);
        psi.amplitudes[index] = C64::new(1.0, 0.0);
        Ok(psi)
    }

    pub fn from_amplitudes(sector: Sector, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != sector.dim() {
            return Err(Error::Dimension { expected: sector.dim(), found: amplitudes.len() });
        }
        Ok(StateVector { sector, amplitudes })
    }

    pub fn from_real(sector: Sector, values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(sector, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn amplitude(&self, ket: Ket) -> Option<C64> {
        self.sector.index(ket).map(|i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.sector != other.sector {
            return Err(Error::Dimension { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scale(&mut self, factor: C64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::domain(format!("cannot normalize a state with norm {norm}")));
        }
        self.scale(C64::new(1.0 / norm, 0.0));
        Ok(self)
    }

    /// Index of the first non-finite amplitude, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.amplitudes.iter().position(|a| !(a.re.is_finite() && a.im.is_finite()))
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        if self.sector != other.sector {
            return Err(Error::Dimension { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }
}
