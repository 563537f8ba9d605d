//! Density-represented observables `(X, 𝓕, F)` over a [`StateSpace`].
//!
//! The measured-value space is `X = ℝᵈ`, events are [`Event`]s (finite
//! disjoint rectangle unions) and `F(Ξ)(ω)` is evaluated as
//! [`Observable::event_prob`]. Normal observables and everything built from
//! them by products, pullbacks and the built-in image maps are evaluated in
//! closed form; one-dimensional custom densities fall back to adaptive
//! quadrature; images without a known law are estimated by seeded Monte Carlo.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::causality::CausalMap;
use crate::error::{Error, Result};
use crate::event::{Event, Rect};
use crate::quadrature;
use crate::space::{State, StateSpace};
use crate::special::{normal_ln_pdf, std_normal_interval};

/// Relative tolerance for quadrature-backed event probabilities.
pub const QUADRATURE_REL_TOL: f64 = 1e-10;

/// Where the standard deviation of a normal observable comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaMode {
    /// A known σ > 0 shared by every state.
    Fixed(f64),
    /// σ is the state coordinate at this index, which must be positivity-masked.
    StateCoordinate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormTag {
    Normal,
    Product,
    Image,
    Pullback,
    Composite,
    Custom,
}

pub type DensityFn = Arc<dyn Fn(&[f64], &State) -> f64 + Send + Sync>;
pub type SamplerFn = Arc<dyn Fn(&State, &mut dyn RngCore) -> Vec<f64> + Send + Sync>;
pub type VectorMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A measurable map `ℝᵈ → ℝᵉ` used to form image observables.
#[derive(Clone)]
pub enum ValueMap {
    Identity,
    /// `(x₁,…,xₙ) ↦ (x₁+…+xₙ)/n`
    SampleMean,
    Custom { out_dim: usize, f: VectorMap },
}

impl ValueMap {
    fn out_dim(&self, in_dim: usize) -> usize {
        match self {
            ValueMap::Identity => in_dim,
            ValueMap::SampleMean => 1,
            ValueMap::Custom { out_dim, .. } => *out_dim,
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ValueMap::Identity => x.to_vec(),
            ValueMap::SampleMean => vec![x.iter().sum::<f64>() / x.len() as f64],
            ValueMap::Custom { f, .. } => f(x),
        }
    }
}

/// How the law of an image observable is obtained.
#[derive(Clone)]
pub enum ImageLaw {
    /// The image law is known and given by this observable.
    ClosedForm(Observable),
    /// Only sampling is available: probabilities are Monte Carlo estimates over
    /// `samples` draws from the base observable seeded with `seed`.
    Sampled { samples: usize, seed: u64 },
}

/// A probability together with its Monte Carlo standard error.
/// `std_error` is `Some(0.0)` for exact evaluations and `None` when an
/// estimate is nested inside a larger construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbEstimate {
    pub value: f64,
    pub std_error: Option<f64>,
}

#[derive(Clone)]
pub(crate) enum Kind {
    Normal { mean_index: usize, sigma: SigmaMode, sd_scale: f64 },
    Product { parts: Vec<Observable>, offsets: Vec<usize> },
    Pullback { map: CausalMap, inner: Observable },
    Image { base: Observable, map: ValueMap, law: ImageLaw },
    Custom { density: DensityFn, sampler: Option<SamplerFn> },
}

struct Inner {
    value_dim: usize,
    space: StateSpace,
    tag: ClosedFormTag,
    kind: Kind,
}

/// An observable with values in ℝᵈ whose law at each state has a density.
#[derive(Clone)]
pub struct Observable(Arc<Inner>);

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("tag", &self.0.tag)
            .field("value_dim", &self.0.value_dim)
            .field("state_space", &self.0.space)
            .finish_non_exhaustive()
    }
}

impl Observable {
    pub(crate) fn from_kind(value_dim: usize, space: StateSpace, tag: ClosedFormTag, kind: Kind) -> Self {
        Self(Arc::new(Inner { value_dim, space, tag, kind }))
    }

    /// Normal observable on `X = ℝ`: the mean is state coordinate
    /// `mean_index` and the standard deviation follows `sigma`.
    pub fn normal(space: &StateSpace, mean_index: usize, sigma: SigmaMode) -> Result<Self> {
        Self::normal_scaled(space, mean_index, sigma, 1.0)
    }

    fn normal_scaled(space: &StateSpace, mean_index: usize, sigma: SigmaMode, sd_scale: f64) -> Result<Self> {
        if mean_index >= space.dims() {
            return Err(Error::Construction(format!(
                "mean coordinate {mean_index} out of range for {}-dimensional state space",
                space.dims()
            )));
        }
        match sigma {
            SigmaMode::Fixed(s) if !(s > 0.0 && s.is_finite()) => {
                return Err(Error::Domain(format!("fixed sigma must be positive and finite, got {s}")));
            }
            SigmaMode::StateCoordinate(i) if i >= space.dims() => {
                return Err(Error::Construction(format!(
                    "sigma coordinate {i} out of range for {}-dimensional state space",
                    space.dims()
                )));
            }
            SigmaMode::StateCoordinate(i) if !space.is_positive(i) => {
                return Err(Error::Construction(format!("sigma coordinate {i} is not positivity-masked")));
            }
            _ => {}
        }
        Ok(Self::from_kind(1, space.clone(), ClosedFormTag::Normal, Kind::Normal { mean_index, sigma, sd_scale }))
    }

    /// `N(μ, σ²)` with known σ on the state space Ω = ℝ.
    pub fn normal_known_sigma(sigma: f64) -> Result<Self> {
        Self::normal(&StateSpace::real(1)?, 0, SigmaMode::Fixed(sigma))
    }

    /// `N(μ, σ²)` on Ω = ℝ × ℝ₊ with state `(μ, σ)`.
    pub fn normal_unknown_sigma() -> Result<Self> {
        Self::normal(&StateSpace::real_with_scale(1)?, 0, SigmaMode::StateCoordinate(1))
    }

    /// Product (simultaneous) observable: values are concatenated and
    /// `F(Ξ₁×…×Ξ_K) = F₁(Ξ₁)⋯F_K(Ξ_K)`.
    pub fn product(parts: Vec<Observable>) -> Result<Self> {
        Self::product_tagged(parts, ClosedFormTag::Product)
    }

    pub(crate) fn product_tagged(parts: Vec<Observable>, tag: ClosedFormTag) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Construction("product of no observables".into()))?;
        let space = first.state_space().clone();
        let mut offsets = Vec::with_capacity(parts.len() + 1);
        let mut dim = 0;
        for (k, p) in parts.iter().enumerate() {
            if *p.state_space() != space {
                return Err(Error::SpaceMismatch(format!(
                    "product part {k} is defined on {:?}, expected {:?}",
                    p.state_space(),
                    space
                )));
            }
            offsets.push(dim);
            dim += p.value_dim();
        }
        offsets.push(dim);
        Ok(Self::from_kind(dim, space, tag, Kind::Product { parts, offsets }))
    }

    /// `n` independent copies of `obs` measured simultaneously.
    pub fn iid(obs: &Observable, n: usize) -> Result<Self> {
        Self::product(vec![obs.clone(); n])
    }

    /// Image observable of `base` under `map`.
    ///
    /// `Identity` and `SampleMean` over i.i.d. normal parts carry built-in
    /// closed forms; any other map needs an explicit [`ImageLaw`].
    pub fn image(base: &Observable, map: ValueMap, law: Option<ImageLaw>) -> Result<Self> {
        let out_dim = map.out_dim(base.value_dim());
        let law = match law {
            Some(l) => l,
            None => match &map {
                ValueMap::Identity => ImageLaw::ClosedForm(base.clone()),
                ValueMap::SampleMean => ImageLaw::ClosedForm(base.sample_mean_law()?),
                ValueMap::Custom { .. } => {
                    return Err(Error::Construction(
                        "image observable needs a closed-form law or a sampling flag".into(),
                    ))
                }
            },
        };
        match &law {
            ImageLaw::ClosedForm(obs) => {
                if obs.state_space() != base.state_space() {
                    return Err(Error::SpaceMismatch("image law lives on a different state space".into()));
                }
                if obs.value_dim() != out_dim {
                    return Err(Error::DimensionMismatch { expected: out_dim, got: obs.value_dim() });
                }
            }
            ImageLaw::Sampled { samples, .. } => {
                if *samples == 0 {
                    return Err(Error::Domain("sampled image needs at least one sample".into()));
                }
                if !base.has_sampler() {
                    return Err(Error::UnsupportedSampling("base observable of sampled image has no sampler".into()));
                }
            }
        }
        Ok(Self::from_kind(out_dim, base.state_space().clone(), ClosedFormTag::Image, Kind::Image {
            base: base.clone(),
            map,
            law,
        }))
    }

    /// Law of the sample mean of `n` i.i.d. normal parts: normal with the
    /// same mean and standard deviation σ/√n.
    fn sample_mean_law(&self) -> Result<Observable> {
        let not_iid = || Error::Construction("sample-mean closed form needs a product of identical normal observables".into());
        let single;
        let parts: &[Observable] = match &self.0.kind {
            Kind::Product { parts, .. } => parts,
            Kind::Normal { .. } => {
                single = [self.clone()];
                &single
            }
            _ => return Err(not_iid()),
        };
        let (mean_index, sigma, sd_scale) = match &parts[0].0.kind {
            Kind::Normal { mean_index, sigma, sd_scale } => (*mean_index, *sigma, *sd_scale),
            _ => return Err(not_iid()),
        };
        for p in parts {
            match &p.0.kind {
                Kind::Normal { mean_index: m, sigma: s, sd_scale: c }
                    if *m == mean_index && *s == sigma && *c == sd_scale => {}
                _ => return Err(not_iid()),
            }
        }
        let n = parts.len() as f64;
        Self::normal_scaled(self.state_space(), mean_index, sigma, sd_scale / n.sqrt())
    }

    /// One-dimensional observable given by an arbitrary density; event
    /// probabilities are computed by adaptive quadrature.
    pub fn custom(space: &StateSpace, density: DensityFn, sampler: Option<SamplerFn>) -> Self {
        Self::from_kind(1, space.clone(), ClosedFormTag::Custom, Kind::Custom { density, sampler })
    }

    pub fn value_dim(&self) -> usize {
        self.0.value_dim
    }

    pub fn state_space(&self) -> &StateSpace {
        &self.0.space
    }

    pub fn tag(&self) -> ClosedFormTag {
        self.0.tag
    }

    /// Standard deviation of a normal observable (or of a closed-form normal
    /// image law) at `state`.
    pub fn normal_sd(&self, state: &State) -> Option<f64> {
        match &self.0.kind {
            Kind::Normal { sigma, sd_scale, .. } => Some(sigma_at(*sigma, state) * sd_scale),
            Kind::Image { law: ImageLaw::ClosedForm(obs), .. } => obs.normal_sd(state),
            _ => None,
        }
    }

    #[cfg(test)]
    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }

    fn check_state(&self, state: &State) -> Result<()> {
        if state.space() != self.state_space() {
            return Err(Error::SpaceMismatch(format!(
                "state lives on {:?}, observable on {:?}",
                state.space(),
                self.state_space()
            )));
        }
        Ok(())
    }

    fn check_value(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.value_dim() {
            return Err(Error::DimensionMismatch { expected: self.value_dim(), got: x.len() });
        }
        Ok(())
    }

    /// `log p(x | ω)`
    pub fn log_density(&self, x: &[f64], state: &State) -> Result<f64> {
        self.check_state(state)?;
        self.check_value(x)?;
        self.ln_pdf(x, state)
    }

    /// `p(x | ω)`
    pub fn density(&self, x: &[f64], state: &State) -> Result<f64> {
        self.log_density(x, state).map(f64::exp)
    }

    fn ln_pdf(&self, x: &[f64], state: &State) -> Result<f64> {
        match &self.0.kind {
            Kind::Normal { mean_index, sigma, sd_scale } => {
                Ok(normal_ln_pdf(x[0], state[*mean_index], sigma_at(*sigma, state) * sd_scale))
            }
            Kind::Product { parts, offsets } => {
                let mut acc = 0.0;
                for (k, p) in parts.iter().enumerate() {
                    acc += p.ln_pdf(&x[offsets[k]..offsets[k + 1]], state)?;
                }
                Ok(acc)
            }
            Kind::Pullback { map, inner } => inner.ln_pdf(x, &map.apply(state)?),
            Kind::Image { law: ImageLaw::ClosedForm(law), .. } => law.ln_pdf(x, state),
            Kind::Image { law: ImageLaw::Sampled { .. }, .. } => {
                Err(Error::Unsupported("density of a sampling-only image observable".into()))
            }
            Kind::Custom { density, .. } => Ok(density(x, state).ln()),
        }
    }

    /// `[F(Ξ)](ω)`
    pub fn event_prob(&self, event: &Event, state: &State) -> Result<f64> {
        self.check_state(state)?;
        if event.dim() != self.value_dim() {
            return Err(Error::DimensionMismatch { expected: self.value_dim(), got: event.dim() });
        }
        let mut total = 0.0;
        for r in event.rects() {
            total += self.rect_prob(r, state)?;
        }
        Ok(total.clamp(0.0, 1.0))
    }

    /// Event probability with a standard error; a top-level sampled image
    /// reports its binomial Monte Carlo error.
    pub fn event_prob_estimate(&self, event: &Event, state: &State) -> Result<ProbEstimate> {
        if let Kind::Image { law: ImageLaw::Sampled { samples, .. }, .. } = &self.0.kind {
            let value = self.event_prob(event, state)?;
            let n = *samples as f64;
            return Ok(ProbEstimate { value, std_error: Some((value * (1.0 - value) / n).sqrt()) });
        }
        let value = self.event_prob(event, state)?;
        Ok(ProbEstimate { value, std_error: if self.is_exact() { Some(0.0) } else { None } })
    }

    fn is_exact(&self) -> bool {
        match &self.0.kind {
            Kind::Normal { .. } | Kind::Custom { .. } => true,
            Kind::Product { parts, .. } => parts.iter().all(Observable::is_exact),
            Kind::Pullback { inner, .. } => inner.is_exact(),
            Kind::Image { law: ImageLaw::ClosedForm(l), .. } => l.is_exact(),
            Kind::Image { law: ImageLaw::Sampled { .. }, .. } => false,
        }
    }

    fn rect_prob(&self, rect: &Rect, state: &State) -> Result<f64> {
        match &self.0.kind {
            Kind::Normal { mean_index, sigma, sd_scale } => {
                let (lo, hi) = rect.axes()[0].endpoints();
                let mu = state[*mean_index];
                let sd = sigma_at(*sigma, state) * sd_scale;
                Ok(std_normal_interval((lo - mu) / sd, (hi - mu) / sd))
            }
            Kind::Product { parts, offsets } => {
                let mut prob = 1.0;
                for (k, p) in parts.iter().enumerate() {
                    prob *= p.rect_prob(&Rect::new(rect.axes()[offsets[k]..offsets[k + 1]].to_vec()), state)?;
                    if prob == 0.0 {
                        break;
                    }
                }
                Ok(prob)
            }
            Kind::Pullback { map, inner } => inner.rect_prob(rect, &map.apply(state)?),
            Kind::Image { law: ImageLaw::ClosedForm(law), .. } => law.rect_prob(rect, state),
            Kind::Image { base, map, law: ImageLaw::Sampled { samples, seed } } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut buf = Vec::with_capacity(base.value_dim());
                let mut hits = 0usize;
                for _ in 0..*samples {
                    buf.clear();
                    base.sample_into(state, &mut rng, &mut buf)?;
                    if rect.contains(&map.apply(&buf)) {
                        hits += 1;
                    }
                }
                Ok(hits as f64 / *samples as f64)
            }
            Kind::Custom { density, .. } => {
                let (lo, hi) = rect.axes()[0].endpoints();
                let p = quadrature::integrate(|t| density(&[t], state), lo, hi, QUADRATURE_REL_TOL);
                Ok(p.clamp(0.0, 1.0))
            }
        }
    }

    pub fn has_sampler(&self) -> bool {
        match &self.0.kind {
            Kind::Normal { .. } => true,
            Kind::Product { parts, .. } => parts.iter().all(Observable::has_sampler),
            Kind::Pullback { inner, .. } => inner.has_sampler(),
            Kind::Image { base, .. } => base.has_sampler(),
            Kind::Custom { sampler, .. } => sampler.is_some(),
        }
    }

    /// Draws `count` i.i.d. measured values at `state`. Deterministic in `seed`.
    pub fn sample(&self, state: &State, seed: u64, count: usize) -> Result<Vec<Vec<f64>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(state, &mut rng, count)
    }

    /// Like [`Observable::sample`] but drawing from a caller-owned generator.
    pub fn sample_with(&self, state: &State, rng: &mut dyn RngCore, count: usize) -> Result<Vec<Vec<f64>>> {
        self.check_state(state)?;
        if !self.has_sampler() {
            return Err(Error::UnsupportedSampling(format!("{:?} observable has no sampler", self.tag())));
        }
        (0..count)
            .map(|_| {
                let mut x = Vec::with_capacity(self.value_dim());
                self.sample_into(state, rng, &mut x)?;
                Ok(x)
            })
            .collect()
    }

    fn sample_into(&self, state: &State, rng: &mut dyn RngCore, out: &mut Vec<f64>) -> Result<()> {
        match &self.0.kind {
            Kind::Normal { mean_index, sigma, sd_scale } => {
                let z: f64 = rng.sample(StandardNormal);
                out.push(state[*mean_index] + sigma_at(*sigma, state) * sd_scale * z);
            }
            Kind::Product { parts, .. } => {
                for p in parts {
                    p.sample_into(state, rng, out)?;
                }
            }
            Kind::Pullback { map, inner } => inner.sample_into(&map.apply(state)?, rng, out)?,
            Kind::Image { base, map, .. } => {
                let mut buf = Vec::with_capacity(base.value_dim());
                base.sample_into(state, rng, &mut buf)?;
                out.extend(map.apply(&buf));
            }
            Kind::Custom { sampler, .. } => match sampler {
                Some(s) => out.extend(s(state, rng)),
                None => return Err(Error::UnsupportedSampling("custom observable without sampler".into())),
            },
        }
        Ok(())
    }
}

fn sigma_at(sigma: SigmaMode, state: &State) -> f64 {
    match sigma {
        SigmaMode::Fixed(s) => s,
        SigmaMode::StateCoordinate(i) => state[i],
    }
}

/// Convenience wrapper: `n` draws from `obs` at `state`.
pub fn sample_measurement(obs: &Observable, state: &State, rng_seed: u64, count: usize) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    obs.sample(state, rng_seed, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Interval;

    fn st(space: &StateSpace, c: &[f64]) -> State {
        State::new(space, c.to_vec()).unwrap()
    }

    #[test]
    fn normal_construction_errors() {
        assert!(matches!(Observable::normal_known_sigma(0.0), Err(Error::Domain(_))));
        assert!(matches!(Observable::normal_known_sigma(-1.0), Err(Error::Domain(_))));
        let r2 = StateSpace::real(2).unwrap();
        assert!(matches!(Observable::normal(&r2, 2, SigmaMode::Fixed(1.0)), Err(Error::Construction(_))));
        assert!(matches!(Observable::normal(&r2, 0, SigmaMode::StateCoordinate(5)), Err(Error::Construction(_))));
        // σ coordinate must be positivity-masked
        assert!(matches!(Observable::normal(&r2, 0, SigmaMode::StateCoordinate(1)), Err(Error::Construction(_))));
    }

    #[test]
    fn normal_half_line_and_whole_line() {
        let o = Observable::normal_unknown_sigma().unwrap();
        let w = st(o.state_space(), &[1.3, 0.7]);
        assert_eq!(o.event_prob(&Event::interval(Interval::at_most(1.3)), &w).unwrap(), 0.5);
        assert_eq!(o.event_prob(&Event::whole(1), &w).unwrap(), 1.0);
        assert_eq!(o.event_prob(&Event::empty(1), &w).unwrap(), 0.0);
    }

    #[test]
    fn density_matches_formula() {
        let o = Observable::normal_unknown_sigma().unwrap();
        let w = st(o.state_space(), &[1.0, 2.0]);
        let x: f64 = 2.5;
        let expect = (-(x - 1.0).powi(2) / 8.0).exp() / ((2.0 * std::f64::consts::PI).sqrt() * 2.0);
        assert!((o.density(&[x], &w).unwrap() - expect).abs() < 1e-16);
    }

    #[test]
    fn product_of_two_half_lines_is_a_quarter() {
        let n = Observable::normal_unknown_sigma().unwrap();
        let p = Observable::product(vec![n.clone(), n]).unwrap();
        let w = st(p.state_space(), &[-0.4, 3.0]);
        let e = Event::rect(Rect::new(vec![Interval::at_most(-0.4); 2]));
        assert_eq!(p.value_dim(), 2);
        assert!((p.event_prob(&e, &w).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn product_rejects_mixed_spaces_and_empty_lists() {
        let a = Observable::normal_unknown_sigma().unwrap();
        let b = Observable::normal_known_sigma(1.0).unwrap();
        assert!(matches!(Observable::product(vec![a, b]), Err(Error::SpaceMismatch(_))));
        assert!(matches!(Observable::product(vec![]), Err(Error::Construction(_))));
    }

    #[test]
    fn sample_mean_image_has_reduced_spread() {
        let n = Observable::normal_unknown_sigma().unwrap();
        let base = Observable::iid(&n, 4).unwrap();
        let img = Observable::image(&base, ValueMap::SampleMean, None).unwrap();
        let w = st(img.state_space(), &[0.0, 2.0]);
        match img.kind() {
            Kind::Image { law: ImageLaw::ClosedForm(l), .. } => assert_eq!(l.normal_sd(&w), Some(1.0)),
            _ => panic!("expected closed-form image"),
        }
        assert_eq!(img.tag(), ClosedFormTag::Image);
    }

    #[test]
    fn sample_mean_needs_identical_normals() {
        let space = StateSpace::real_with_scale(1).unwrap();
        let a = Observable::normal(&space, 0, SigmaMode::StateCoordinate(1)).unwrap();
        let b = Observable::normal(&space, 0, SigmaMode::Fixed(1.0)).unwrap();
        let base = Observable::product(vec![a, b]).unwrap();
        assert!(Observable::image(&base, ValueMap::SampleMean, None).is_err());
        let custom = ValueMap::Custom { out_dim: 1, f: Arc::new(|x: &[f64]| vec![x[0]]) };
        assert!(matches!(Observable::image(&base, custom, None), Err(Error::Construction(_))));
    }

    #[test]
    fn sampled_image_reports_binomial_error() {
        let n = Observable::normal_unknown_sigma().unwrap();
        let base = Observable::iid(&n, 3).unwrap();
        let max = ValueMap::Custom { out_dim: 1, f: Arc::new(|x: &[f64]| vec![x.iter().cloned().fold(f64::MIN, f64::max)]) };
        let img = Observable::image(&base, max, Some(ImageLaw::Sampled { samples: 20_000, seed: 9 })).unwrap();
        let w = st(img.state_space(), &[0.0, 1.0]);
        let est = img.event_prob_estimate(&Event::interval(Interval::at_most(0.0)), &w).unwrap();
        // P(max ≤ 0) = 1/8
        let se = est.std_error.unwrap();
        assert!(se > 0.0);
        assert!((est.value - 0.125).abs() < 4.0 * se, "{est:?}");
        assert!(img.density(&[0.0], &w).is_err());
    }

    #[test]
    fn custom_density_uses_quadrature() {
        let space = StateSpace::real_with_scale(0).unwrap();
        // exponential with rate λ = ω₀
        let dens: DensityFn = Arc::new(|x: &[f64], w: &State| if x[0] < 0.0 { 0.0 } else { w[0] * (-w[0] * x[0]).exp() });
        let o = Observable::custom(&space, dens, None);
        let w = st(&space, &[2.0]);
        let p = o.event_prob(&Event::interval(Interval::closed(0.0, 1.0)), &w).unwrap();
        assert!((p - (1.0 - (-2.0f64).exp())).abs() < 1e-10);
        assert!((o.event_prob(&Event::whole(1), &w).unwrap() - 1.0).abs() < 1e-9);
        assert!(matches!(o.sample(&w, 1, 1), Err(Error::UnsupportedSampling(_))));
    }

    #[test]
    fn sampling_is_deterministic_and_shaped() {
        let n = Observable::normal_unknown_sigma().unwrap();
        let p = Observable::iid(&n, 3).unwrap();
        let w = st(p.state_space(), &[0.0, 1.0]);
        let a = sample_measurement(&p, &w, 77, 50).unwrap();
        let b = sample_measurement(&p, &w, 77, 50).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| x.len() == 3));
        assert_ne!(a, sample_measurement(&p, &w, 78, 50).unwrap());
        assert!(sample_measurement(&p, &w, 1, 0).is_err());
    }

    #[test]
    fn mismatched_state_or_event_is_rejected() {
        let n = Observable::normal_unknown_sigma().unwrap();
        let other = StateSpace::real(2).unwrap();
        let w = st(&other, &[0.0, 1.0]);
        assert!(matches!(n.event_prob(&Event::whole(1), &w), Err(Error::SpaceMismatch(_))));
        let good = st(n.state_space(), &[0.0, 1.0]);
        assert!(matches!(n.event_prob(&Event::whole(2), &good), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(n.log_density(&[0.0, 1.0], &good), Err(Error::DimensionMismatch { .. })));
    }
}
