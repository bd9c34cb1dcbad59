//! Network geometry and per-drop channel realizations.
//!
//! A drop places users uniformly over a disc around the base station, draws
//! one log-normal shadowing value per user and one Rayleigh fading power per
//! (user, channel) pair. The fading for user `n` comes from its own ChaCha
//! stream, so the first `M` channels of a drop are identical whether the drop
//! was sampled with `M` or with more channels. Geometry is drawn user by user
//! from stream 0, which gives the same prefix property over users.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Normal};

use crate::error::{Error, Result};
use crate::units::{db_to_linear, dbm_to_mw, linear_to_db};

/// Users closer than this are placed at this distance (1 m).
pub const MIN_DISTANCE_KM: f64 = 1e-3;

/// Radio parameters shared by every link of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioParams {
    /// Bandwidth of one channel, Hz.
    pub bandwidth_hz: f64,
    /// Noise power spectral density, dBm/Hz.
    pub noise_psd_dbm_hz: f64,
    /// Transmit power per user, dBm.
    pub tx_power_dbm: f64,
    /// Pathloss intercept at 1 km, dB.
    pub pathloss_a: f64,
    /// Pathloss slope, dB per decade of distance.
    pub pathloss_b: f64,
    /// Standard deviation of log-normal shadowing, dB.
    pub shadow_sigma_db: f64,
    pub cell_radius_km: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            bandwidth_hz: 180e3,
            noise_psd_dbm_hz: -174.0,
            tx_power_dbm: 10.0,
            pathloss_a: 128.1,
            pathloss_b: 37.6,
            shadow_sigma_db: 6.0,
            cell_radius_km: 0.5,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.bandwidth_hz,
            self.noise_psd_dbm_hz,
            self.tx_power_dbm,
            self.pathloss_a,
            self.pathloss_b,
            self.shadow_sigma_db,
            self.cell_radius_km,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::validation("radio parameters must be finite"));
        }
        if self.bandwidth_hz <= 0.0 {
            return Err(Error::validation("bandwidth_hz must be > 0"));
        }
        if self.cell_radius_km <= 0.0 {
            return Err(Error::validation("cell_radius_km must be > 0"));
        }
        if self.pathloss_b < 0.0 {
            return Err(Error::validation("pathloss_b must be >= 0"));
        }
        if self.shadow_sigma_db < 0.0 {
            return Err(Error::validation("shadow_sigma_db must be >= 0"));
        }
        Ok(())
    }

    /// Transmit power in mW.
    pub fn tx_power_mw(&self) -> f64 {
        dbm_to_mw(self.tx_power_dbm)
    }

    /// Noise power over one channel, W·N₀, in mW.
    pub fn noise_power_mw(&self) -> f64 {
        self.bandwidth_hz * dbm_to_mw(self.noise_psd_dbm_hz)
    }
}

/// One (user, channel) link of a drop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkRealization {
    /// Pathloss and shadowing combined, linear power ratio.
    pub large_scale_gain: f64,
    /// |h|², linear.
    pub fading_power: f64,
    pub snr_linear: f64,
    pub snr_db: f64,
}

/// One Monte-Carlo realization of user positions, shadowing and fading.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDrop {
    pub user_distances_km: Vec<f64>,
    /// Shadowing per user, dB. Kept for diagnostics; already folded into the
    /// large-scale gain of every link.
    pub shadowing_db: Vec<f64>,
    links: Vec<LinkRealization>,
    n_channels: usize,
}

impl NetworkDrop {
    /// Assemble a drop from explicit links, row-major over users.
    pub fn from_links(
        user_distances_km: Vec<f64>,
        shadowing_db: Vec<f64>,
        links: Vec<Vec<LinkRealization>>,
    ) -> Result<Self> {
        let n_users = user_distances_km.len();
        if n_users == 0 || links.len() != n_users || shadowing_db.len() != n_users {
            return Err(Error::domain("drop rows must match the number of users"));
        }
        let n_channels = links[0].len();
        if n_channels == 0 || links.iter().any(|row| row.len() != n_channels) {
            return Err(Error::domain("every user needs the same non-zero channel count"));
        }
        Ok(Self {
            user_distances_km,
            shadowing_db,
            links: links.into_iter().flatten().collect(),
            n_channels,
        })
    }

    pub fn n_users(&self) -> usize {
        self.user_distances_km.len()
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn link(&self, user: usize, channel: usize) -> &LinkRealization {
        assert!(channel < self.n_channels, "channel index out of range");
        &self.links[user * self.n_channels + channel]
    }

    pub fn row(&self, user: usize) -> &[LinkRealization] {
        &self.links[user * self.n_channels..(user + 1) * self.n_channels]
    }

    /// The same drop restricted to its first `n_channels` channels.
    pub fn with_channel_prefix(&self, n_channels: usize) -> Result<Self> {
        if n_channels == 0 || n_channels > self.n_channels {
            return Err(Error::domain(format!(
                "channel prefix {n_channels} outside 1..={}",
                self.n_channels
            )));
        }
        let links = (0..self.n_users())
            .flat_map(|u| self.row(u)[..n_channels].iter().copied())
            .collect();
        Ok(Self {
            user_distances_km: self.user_distances_km.clone(),
            shadowing_db: self.shadowing_db.clone(),
            links,
            n_channels,
        })
    }
}

/// Distance-dependent pathloss `a + b·log10(d)`, dB.
pub fn pathloss_db(distance_km: f64, params: &RadioParams) -> Result<f64> {
    if !(distance_km > 0.0) || !distance_km.is_finite() {
        return Err(Error::domain(format!(
            "distance must be positive and finite, got {distance_km}"
        )));
    }
    Ok(params.pathloss_a + params.pathloss_b * distance_km.log10())
}

/// Link SNR `p·g·|h|² / (W·N₀)`, returned as `(linear, dB)`.
pub fn snr(params: &RadioParams, large_scale_gain: f64, fading_power: f64) -> Result<(f64, f64)> {
    if !(large_scale_gain > 0.0) || !(fading_power > 0.0) {
        return Err(Error::domain("gain and fading power must be positive"));
    }
    let lin = params.tx_power_mw() * large_scale_gain * fading_power / params.noise_power_mw();
    Ok((lin, linear_to_db(lin)))
}

/// Build one link from its physical ingredients.
pub fn link_realization(
    params: &RadioParams,
    distance_km: f64,
    shadowing_db: f64,
    fading_power: f64,
) -> Result<LinkRealization> {
    let loss_db = pathloss_db(distance_km.max(MIN_DISTANCE_KM), params)? + shadowing_db;
    let large_scale_gain = db_to_linear(-loss_db);
    let (snr_linear, snr_db) = snr(params, large_scale_gain, fading_power)?;
    Ok(LinkRealization {
        large_scale_gain,
        fading_power,
        snr_linear,
        snr_db,
    })
}

/// Sample one drop. Deterministic in `rng_seed`.
pub fn sample_drop(
    n_users: usize,
    n_channels: usize,
    params: &RadioParams,
    rng_seed: u64,
) -> Result<NetworkDrop> {
    if n_users == 0 || n_channels == 0 {
        return Err(Error::domain("a drop needs at least one user and one channel"));
    }
    params.validate()?;
    let shadow = Normal::new(0.0, params.shadow_sigma_db)
        .map_err(|e| Error::domain(format!("shadowing distribution: {e}")))?;

    let mut geometry = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut distances = Vec::with_capacity(n_users);
    let mut shadowing = Vec::with_capacity(n_users);
    for _ in 0..n_users {
        // 1 - U lies in (0, 1]; sqrt gives the d² CDF of a uniform disc.
        let u: f64 = geometry.random();
        let d = (params.cell_radius_km * (1.0 - u).sqrt()).max(MIN_DISTANCE_KM);
        distances.push(d);
        shadowing.push(shadow.sample(&mut geometry));
    }

    let mut links = Vec::with_capacity(n_users * n_channels);
    for (user, (&d, &s)) in distances.iter().zip(&shadowing).enumerate() {
        let mut fading = ChaCha8Rng::seed_from_u64(rng_seed);
        fading.set_stream(user as u64 + 1);
        for _ in 0..n_channels {
            let mut h2: f64 = Exp1.sample(&mut fading);
            // Exp1 can return exactly 0 with vanishing probability.
            if h2 <= 0.0 {
                h2 = f64::MIN_POSITIVE;
            }
            links.push(link_realization(params, d, s, h2)?);
        }
    }

    Ok(NetworkDrop {
        user_distances_km: distances,
        shadowing_db: shadowing,
        links,
        n_channels,
    })
}
