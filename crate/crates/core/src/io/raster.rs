use crate::clustering::{CentroidSet, Membership};
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// 8-bit RGB image, pixels row-major from the top-left corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "image must be at least 1x1, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: pixels.len(),
                context: "pixel count",
            });
        }
        Ok(RasterImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }
}

/// One row per pixel with the three channels as reals in `[0, 255]`.
pub fn image_to_matrix(image: &RasterImage) -> DataMatrix {
    let values = image
        .pixels
        .iter()
        .flat_map(|px| px.iter().map(|&c| f64::from(c)))
        .collect();
    DataMatrix::from_flat(image.pixels.len(), 3, values).expect("pixel matrix is well formed")
}

fn to_channel(v: f64) -> u8 {
    // Round half up, then clamp.
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Paint every pixel with the color of its cluster center.
pub fn recolor(
    image: &RasterImage,
    membership: &Membership,
    centroids: &CentroidSet,
) -> Result<RasterImage> {
    if membership.len() != image.pixels.len() {
        return Err(Error::DimensionMismatch {
            expected: image.pixels.len(),
            actual: membership.len(),
            context: "membership length",
        });
    }
    if centroids.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: centroids.dim(),
            context: "centroid channels",
        });
    }
    if membership.k() > centroids.k() {
        return Err(Error::DimensionMismatch {
            expected: centroids.k(),
            actual: membership.k(),
            context: "cluster count",
        });
    }
    let palette: Vec<[u8; 3]> = centroids
        .centers()
        .map(|c| {
            if c.iter().any(|v| v.is_nan()) {
                Err(Error::InvalidParameter("centroid channel is NaN".into()))
            } else {
                Ok([to_channel(c[0]), to_channel(c[1]), to_channel(c[2])])
            }
        })
        .collect::<Result<_>>()?;
    let pixels = membership.labels().iter().map(|&l| palette[l]).collect();
    RasterImage::new(image.width, image.height, pixels)
}

/// Black out every pixel not in `cluster`.
pub fn keep_cluster(
    image: &RasterImage,
    membership: &Membership,
    cluster: usize,
) -> Result<RasterImage> {
    if membership.len() != image.pixels.len() {
        return Err(Error::DimensionMismatch {
            expected: image.pixels.len(),
            actual: membership.len(),
            context: "membership length",
        });
    }
    let pixels = image
        .pixels
        .iter()
        .zip(membership.labels())
        .map(|(&px, &l)| if l == cluster { px } else { [0, 0, 0] })
        .collect();
    RasterImage::new(image.width, image.height, pixels)
}

/// Rec.601 luma `round(0.299R + 0.587G + 0.114B)` replicated into all three channels.
pub fn to_grayscale(image: &RasterImage) -> RasterImage {
    let pixels = image
        .pixels
        .iter()
        .map(|&[r, g, b]| {
            let y = to_channel(0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b));
            [y, y, y]
        })
        .collect();
    RasterImage {
        width: image.width,
        height: image.height,
        pixels,
    }
}
