//! Color segmentation: cluster the pixels of an RGB image and repaint each
//! pixel with its cluster center.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::clustering::{
    adaptive_tau_cluster, fixed_tau_cluster, kmeans, rng_from_seed, ClusterConfig, ClusterResult,
    TauSpec,
};
use crate::error::{Error, Result};
use crate::io::{image_to_matrix, keep_cluster, recolor, to_grayscale, RasterImage};
use crate::metrics::{mse_image, psnr};

#[derive(Debug, Clone, PartialEq)]
pub enum SegmentMode {
    KMeans,
    Fixed(TauSpec),
    Adaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segmentation {
    pub result: ClusterResult,
    /// Every pixel painted with its cluster center.
    pub image: RasterImage,
}

impl Segmentation {
    /// The recolored image with every cluster except `cluster` blacked out.
    pub fn only_cluster(&self, cluster: usize) -> Result<RasterImage> {
        if cluster >= self.result.centroids.k() {
            return Err(Error::InvalidParameter(format!(
                "cluster {cluster} out of range for k = {}",
                self.result.centroids.k()
            )));
        }
        keep_cluster(&self.image, &self.result.membership, cluster)
    }
}

pub fn segment_image(
    image: &RasterImage,
    k: usize,
    mode: &SegmentMode,
    config: &ClusterConfig,
) -> Result<Segmentation> {
    let data = image_to_matrix(image);
    let result = match mode {
        SegmentMode::KMeans => kmeans(&data, k, config)?,
        SegmentMode::Fixed(spec) => fixed_tau_cluster(&data, k, spec, config)?,
        SegmentMode::Adaptive => adaptive_tau_cluster(&data, k, config)?,
    };
    let image = recolor(image, &result.membership, &result.centroids)?;
    Ok(Segmentation { result, image })
}

/// Fidelity of a segmented image. PSNR is `+∞` when the error is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentQuality {
    pub rgb_mse: f64,
    pub rgb_psnr: f64,
    pub gray_mse: f64,
    pub gray_psnr: f64,
}

fn psnr_or_inf(mse: f64) -> Result<f64> {
    match psnr(mse, 255.0) {
        Err(Error::InfinitePsnr) => Ok(f64::INFINITY),
        other => other,
    }
}

pub fn segment_quality(original: &RasterImage, segmented: &RasterImage) -> Result<SegmentQuality> {
    let rgb_mse = mse_image(original, segmented)?;
    let gray_mse = mse_image(&to_grayscale(original), &to_grayscale(segmented))?;
    Ok(SegmentQuality {
        rgb_mse,
        rgb_psnr: psnr_or_inf(rgb_mse)?,
        gray_mse,
        gray_psnr: psnr_or_inf(gray_mse)?,
    })
}

/// A test image made of `regions` flat-colored Voronoi cells with additive
/// Gaussian noise (standard deviation `noise_sd`, per channel), rounded and
/// clamped to 8 bits.
pub fn synthetic_regions_image(
    width: usize,
    height: usize,
    regions: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<RasterImage> {
    if regions == 0 {
        return Err(Error::InvalidParameter("need at least one region".into()));
    }
    let noise = Normal::new(0.0, noise_sd)
        .map_err(|_| Error::InvalidParameter(format!("invalid noise sd {noise_sd}")))?;
    let mut rng = rng_from_seed(seed);
    let sites: Vec<(f64, f64, [f64; 3])> = (0..regions)
        .map(|_| {
            let x = rng.gen_range(0.0..width as f64);
            let y = rng.gen_range(0.0..height as f64);
            let color = [0; 3].map(|_: u8| f64::from(rng.gen::<u8>()));
            (x, y, color)
        })
        .collect();
    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
            let site = sites
                .iter()
                .min_by(|a, b| {
                    let da = (a.0 - px).powi(2) + (a.1 - py).powi(2);
                    let db = (b.0 - px).powi(2) + (b.1 - py).powi(2);
                    da.total_cmp(&db)
                })
                .expect("at least one site");
            let px = site
                .2
                .map(|c| (c + noise.sample(&mut rng) + 0.5).floor().clamp(0.0, 255.0) as u8);
            pixels.push(px);
        }
    }
    RasterImage::new(width, height, pixels)
}
