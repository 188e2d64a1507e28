//! Wave functions on a finite ring of integer sites.

use crate::error::{Error, Result};
use crate::{Spinor, C64};

fn check_range(n_min: i64, n_max: i64) -> Result<usize> {
    if n_max < n_min {
        return Err(Error::invalid(format!(
            "empty lattice: n_max {n_max} < n_min {n_min}"
        )));
    }
    Ok((n_max - n_min + 1) as usize)
}

/// Sites (relative density above `rel_eps` of the total) spanned by a density.
fn support_of(n_min: i64, rho: impl Iterator<Item = f64> + Clone, rel_eps: f64) -> Option<(i64, i64)> {
    let total: f64 = rho.clone().sum();
    if !(total > 0.0) {
        return None;
    }
    let cut = rel_eps * total;
    let mut lo = None;
    let mut hi = None;
    for (i, r) in rho.enumerate() {
        if r > cut {
            lo.get_or_insert(i as i64 + n_min);
            hi = Some(i as i64 + n_min);
        }
    }
    lo.zip(hi)
}

/// Two-component amplitudes `(ψ_R, ψ_L)` on sites `n_min..=n_max`.
///
/// The physical position of site `n` is `n · spacing`; `spacing` is 1 for the
/// walks and `ε` for a discretized Dirac field. Norms include the spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorLattice {
    n_min: i64,
    up: Vec<C64>,
    down: Vec<C64>,
    spacing: f64,
}

impl SpinorLattice {
    pub fn new(n_min: i64, n_max: i64, spacing: f64) -> Result<Self> {
        let len = check_range(n_min, n_max)?;
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::invalid(format!("spacing must be positive, got {spacing}")));
        }
        Ok(SpinorLattice {
            n_min,
            up: vec![C64::new(0.0, 0.0); len],
            down: vec![C64::new(0.0, 0.0); len],
            spacing,
        })
    }

    pub fn from_fn<F>(n_min: i64, n_max: i64, spacing: f64, f: F) -> Result<Self>
    where
        F: Fn(i64) -> Spinor,
    {
        let mut lat = Self::new(n_min, n_max, spacing)?;
        for (i, n) in (n_min..=n_max).enumerate() {
            let [u, d] = f(n);
            lat.up[i] = u;
            lat.down[i] = d;
        }
        Ok(lat)
    }

    pub fn from_components(n_min: i64, up: Vec<C64>, down: Vec<C64>, spacing: f64) -> Result<Self> {
        if up.len() != down.len() || up.is_empty() {
            return Err(Error::invalid(format!(
                "component lengths {} and {} must match and be non-zero",
                up.len(),
                down.len()
            )));
        }
        let mut lat = Self::new(n_min, n_min + up.len() as i64 - 1, spacing)?;
        lat.up = up;
        lat.down = down;
        Ok(lat)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.up.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn up(&self) -> &[C64] {
        &self.up
    }

    pub fn down(&self) -> &[C64] {
        &self.down
    }

    pub fn components_mut(&mut self) -> (&mut [C64], &mut [C64]) {
        (&mut self.up, &mut self.down)
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max()
    }

    pub fn position(&self, n: i64) -> f64 {
        n as f64 * self.spacing
    }

    fn index(&self, n: i64) -> Option<usize> {
        (n >= self.n_min && n <= self.n_max()).then(|| (n - self.n_min) as usize)
    }

    pub fn get(&self, n: i64) -> Option<Spinor> {
        self.index(n).map(|i| [self.up[i], self.down[i]])
    }

    pub fn set(&mut self, n: i64, value: Spinor) -> Result<()> {
        let i = self
            .index(n)
            .ok_or_else(|| Error::invalid(format!("site {n} outside the lattice")))?;
        self.up[i] = value[0];
        self.down[i] = value[1];
        Ok(())
    }

    /// `Σ_n (|ψ_R|² + |ψ_L|²) · spacing`
    pub fn norm_sqr(&self) -> f64 {
        self.up
            .iter()
            .zip(&self.down)
            .map(|(u, d)| u.norm_sqr() + d.norm_sqr())
            .sum::<f64>()
            * self.spacing
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::invalid("cannot normalize a zero or non-finite state"));
        }
        self.up.iter_mut().chain(self.down.iter_mut()).for_each(|v| *v /= norm);
        Ok(())
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.clone();
        out.up.iter_mut().chain(out.down.iter_mut()).for_each(|v| *v *= factor);
        out
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n_min != other.n_min || self.len() != other.len() || self.spacing != other.spacing {
            return Err(Error::invalid("lattices differ in extent or spacing"));
        }
        Ok(())
    }

    /// `self + factor · other` on identical lattices.
    pub fn add_scaled(&self, factor: C64, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (o, v) in out.up.iter_mut().zip(&other.up) {
            *o += factor * v;
        }
        for (o, v) in out.down.iter_mut().zip(&other.down) {
            *o += factor * v;
        }
        Ok(out)
    }

    /// L² distance including the spacing.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.add_scaled(C64::new(-1.0, 0.0), other)?.norm_sqr().sqrt())
    }

    /// Largest component-wise amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .up
            .iter()
            .zip(&other.up)
            .chain(self.down.iter().zip(&other.down))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Smallest site interval holding every site whose density exceeds
    /// `rel_eps` times the total.
    pub fn support(&self, rel_eps: f64) -> Option<(i64, i64)> {
        let rho = self.up.iter().zip(&self.down).map(|(u, d)| u.norm_sqr() + d.norm_sqr());
        support_of(self.n_min, rho, rel_eps)
    }
}

/// One-component amplitudes on sites `n_min..=n_max` with unit spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarLattice {
    n_min: i64,
    amp: Vec<C64>,
}

impl ScalarLattice {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        let len = check_range(n_min, n_max)?;
        Ok(ScalarLattice {
            n_min,
            amp: vec![C64::new(0.0, 0.0); len],
        })
    }

    pub fn from_fn<F>(n_min: i64, n_max: i64, f: F) -> Result<Self>
    where
        F: Fn(i64) -> C64,
    {
        check_range(n_min, n_max)?;
        Ok(ScalarLattice {
            n_min,
            amp: (n_min..=n_max).map(f).collect(),
        })
    }

    pub fn from_amplitudes(n_min: i64, amp: Vec<C64>) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::invalid("empty amplitude vector"));
        }
        Ok(ScalarLattice { n_min, amp })
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.amp.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.amp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp.is_empty()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amp
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max()
    }

    pub fn get(&self, n: i64) -> Option<C64> {
        (n >= self.n_min && n <= self.n_max()).then(|| self.amp[(n - self.n_min) as usize])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::invalid("cannot normalize a zero or non-finite state"));
        }
        self.amp.iter_mut().for_each(|v| *v /= norm);
        Ok(())
    }

    pub fn add_scaled(&self, factor: C64, other: &Self) -> Result<Self> {
        if self.n_min != other.n_min || self.len() != other.len() {
            return Err(Error::invalid("lattices differ in extent"));
        }
        Ok(ScalarLattice {
            n_min: self.n_min,
            amp: self.amp.iter().zip(&other.amp).map(|(a, b)| a + factor * b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n_min != other.n_min || self.len() != other.len() {
            return Err(Error::invalid("lattices differ in extent"));
        }
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn support(&self, rel_eps: f64) -> Option<(i64, i64)> {
        support_of(self.n_min, self.amp.iter().map(|a| a.norm_sqr()), rel_eps)
    }
}
