//! Gray-guided guided filter over clipped square windows.
//!
//! Intensities are mapped to `[0, 1]` before filtering so `epsilon` lives on
//! the usual normalized scale (`0.2² = 0.04` is a moderate setting); the result
//! is mapped back to `[0, 255]`.

use crate::error::{Error, Result};
use crate::imaging::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidedParams {
    pub radius: usize,
    pub epsilon: f64,
}

impl Default for GuidedParams {
    fn default() -> Self {
        Self {
            radius: 4,
            epsilon: 0.04,
        }
    }
}

impl GuidedParams {
    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::InvalidParameter("guided radius must be >= 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "guided epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Summed-area table with clipped-window means.
struct BoxMeans {
    width: usize,
    height: usize,
    radius: usize,
}

impl BoxMeans {
    fn mean(&self, data: &[f64]) -> Vec<f64> {
        let (w, h, r) = (self.width, self.height, self.radius);
        let stride = w + 1;
        let mut sat = vec![0.0; stride * (h + 1)];
        for y in 0..h {
            let mut row_sum = 0.0;
            for x in 0..w {
                row_sum += data[y * w + x];
                sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1] + row_sum;
            }
        }
        let mut out = Vec::with_capacity(w * h);
        for y in 0..h {
            let (y0, y1) = (y.saturating_sub(r), (y + r + 1).min(h));
            for x in 0..w {
                let (x0, x1) = (x.saturating_sub(r), (x + r + 1).min(w));
                let sum = sat[y1 * stride + x1] - sat[y0 * stride + x1] - sat[y1 * stride + x0]
                    + sat[y0 * stride + x0];
                out.push(sum / ((x1 - x0) * (y1 - y0)) as f64);
            }
        }
        out
    }
}

fn check_pair(guidance: &GrayImage, input: &GrayImage) -> Result<()> {
    if (guidance.width(), guidance.height()) != (input.width(), input.height()) {
        return Err(Error::DimensionMismatch(format!(
            "guidance is {}x{}, input is {}x{}",
            guidance.width(),
            guidance.height(),
            input.width(),
            input.height()
        )));
    }
    Ok(())
}

/// Guided filter output on the `[0, 255]` scale, before clamping.
///
/// The filter may overshoot the input range slightly near strong guidance edges.
pub fn guided_filter_unclamped(
    guidance: &GrayImage,
    input: &GrayImage,
    params: &GuidedParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    check_pair(guidance, input)?;
    let boxes = BoxMeans {
        width: guidance.width(),
        height: guidance.height(),
        radius: params.radius,
    };
    let guide: Vec<f64> = guidance.data().iter().map(|v| v / 255.0).collect();
    let src: Vec<f64> = input.data().iter().map(|v| v / 255.0).collect();

    let mean_i = boxes.mean(&guide);
    let mean_p = boxes.mean(&src);
    let corr_ii = boxes.mean(&guide.iter().map(|v| v * v).collect::<Vec<_>>());
    let corr_ip = boxes.mean(
        &guide
            .iter()
            .zip(&src)
            .map(|(i, p)| i * p)
            .collect::<Vec<_>>(),
    );

    let mut a = Vec::with_capacity(guide.len());
    let mut b = Vec::with_capacity(guide.len());
    for k in 0..guide.len() {
        // Clamp guards against tiny negative variances from cancellation.
        let var = (corr_ii[k] - mean_i[k] * mean_i[k]).max(0.0);
        let cov = corr_ip[k] - mean_i[k] * mean_p[k];
        let ak = cov / (var + params.epsilon);
        a.push(ak);
        b.push(mean_p[k] - ak * mean_i[k]);
    }
    let mean_a = boxes.mean(&a);
    let mean_b = boxes.mean(&b);

    Ok(guide
        .iter()
        .zip(mean_a.iter().zip(&mean_b))
        .map(|(i, (ma, mb))| (ma * i + mb) * 255.0)
        .collect())
}

/// Guided filter of `input` steered by `guidance`, clamped to `[0, 255]`.
pub fn guided_filter(
    guidance: &GrayImage,
    input: &GrayImage,
    params: &GuidedParams,
) -> Result<GrayImage> {
    let raw = guided_filter_unclamped(guidance, input, params)?;
    GrayImage::from_clamped(guidance.width(), guidance.height(), raw)
}

/// Explicit kernel weight between output pixel `i` and input pixel `j`.
///
/// Sums over every clipped window that contains both pixels, evaluating the
/// window statistics directly. `O(r²)` windows of `O(r²)` pixels each; meant
/// as a reference for [`guided_filter`], not for production use.
pub fn guided_kernel_weight(
    guidance: &GrayImage,
    i: (usize, usize),
    j: (usize, usize),
    params: &GuidedParams,
) -> f64 {
    let (w, h, r) = (guidance.width(), guidance.height(), params.radius);
    let at = |x: usize, y: usize| guidance.get(x, y) / 255.0;
    let span = |c: usize, n: usize| (c.saturating_sub(r), (c + r).min(n - 1));

    // Every window centered within r of i.
    let (kx0, kx1) = span(i.0, w);
    let (ky0, ky1) = span(i.1, h);
    let windows_with_i = (kx1 - kx0 + 1) * (ky1 - ky0 + 1);

    let mut total = 0.0;
    for ky in ky0..=ky1 {
        for kx in kx0..=kx1 {
            if kx.abs_diff(j.0) > r || ky.abs_diff(j.1) > r {
                continue;
            }
            let (x0, x1) = span(kx, w);
            let (y0, y1) = span(ky, h);
            let n = ((x1 - x0 + 1) * (y1 - y0 + 1)) as f64;
            let mut mean = 0.0;
            for y in y0..=y1 {
                for x in x0..=x1 {
                    mean += at(x, y);
                }
            }
            mean /= n;
            let mut var = 0.0;
            for y in y0..=y1 {
                for x in x0..=x1 {
                    var += (at(x, y) - mean).powi(2);
                }
            }
            var /= n;
            let coupling = (at(i.0, i.1) - mean) * (at(j.0, j.1) - mean) / (var + params.epsilon);
            total += (1.0 + coupling) / n;
        }
    }
    total / windows_with_i as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(radius: usize, epsilon: f64) -> GuidedParams {
        GuidedParams { radius, epsilon }
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = GrayImage::filled(4, 4, 0.0);
        let b = GrayImage::filled(5, 4, 0.0);
        assert!(matches!(
            guided_filter(&a, &b, &params(1, 0.04)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(guided_filter(&a, &a, &params(1, 0.0)).is_err());
        assert!(guided_filter(&a, &a, &params(1, -1.0)).is_err());
        assert!(guided_filter(&a, &a, &params(0, 0.04)).is_err());
    }

    #[test]
    fn constant_input_is_fixed() {
        let guide = GrayImage::from_fn(11, 9, |x, y| ((x * 37 + y * 11) % 256) as f64).unwrap();
        let input = GrayImage::filled(11, 9, 200.0);
        let out = guided_filter(&guide, &input, &params(2, 0.04)).unwrap();
        assert!(out.data().iter().all(|v| (v - 200.0).abs() < 1e-9));
    }

    #[test]
    fn constant_guidance_weight_on_diagonal() {
        let guide = GrayImage::filled(15, 15, 80.0);
        let p = params(2, 0.04);
        let wgt = guided_kernel_weight(&guide, (7, 7), (7, 7), &p);
        assert!((wgt - 1.0 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn far_pixels_have_zero_weight() {
        let guide = GrayImage::from_fn(15, 15, |x, y| (x * y % 200) as f64).unwrap();
        let p = params(2, 0.04);
        assert_eq!(guided_kernel_weight(&guide, (2, 2), (7, 2), &p), 0.0);
    }

    #[test]
    fn interior_weights_are_symmetric() {
        let guide = GrayImage::from_fn(16, 16, |x, y| ((x * 53 + y * 17) % 255) as f64).unwrap();
        let p = params(2, 0.04);
        for (i, j) in [((6, 6), (8, 9)), ((7, 8), (10, 6)), ((5, 5), (5, 9))] {
            let a = guided_kernel_weight(&guide, i, j, &p);
            let b = guided_kernel_weight(&guide, j, i, &p);
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }
}
