//! Square-element binary opening/closing, the classical post-processing baseline.

use super::raster::BinaryMask;

fn sweep(mask: &BinaryMask, radius: usize, dilate: bool) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let bits = mask.bits();
    // Separable: a square element is a row pass followed by a column pass.
    // Windows are clipped at the border, so out-of-image pixels never vote.
    let mut rows = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let lo = x.saturating_sub(radius);
            let hi = (x + radius).min(w - 1);
            let window = &bits[y * w + lo..=y * w + hi];
            rows[y * w + x] = if dilate {
                window.iter().any(|&b| b)
            } else {
                window.iter().all(|&b| b)
            };
        }
    }
    BinaryMask::from_fn(w, h, |x, y| {
        let lo = y.saturating_sub(radius);
        let hi = (y + radius).min(h - 1);
        let mut column = (lo..=hi).map(|yy| rows[yy * w + x]);
        if dilate {
            column.any(|b| b)
        } else {
            column.all(|b| b)
        }
    })
}

pub fn erode(mask: &BinaryMask, radius: usize) -> BinaryMask {
    sweep(mask, radius, false)
}

pub fn dilate(mask: &BinaryMask, radius: usize) -> BinaryMask {
    sweep(mask, radius, true)
}

/// Opening (erode, dilate) followed by closing (dilate, erode) with a
/// `(2r+1)`-square structuring element.
pub fn morphological_open_close(mask: &BinaryMask, radius: usize) -> BinaryMask {
    let opened = dilate(&erode(mask, radius), radius);
    erode(&dilate(&opened, radius), radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_pixel_is_removed() {
        let mut m = BinaryMask::zeros(9, 9);
        m.set(4, 4, true);
        assert_eq!(morphological_open_close(&m, 1), BinaryMask::zeros(9, 9));
    }

    #[test]
    fn solid_square_is_unchanged() {
        let m = BinaryMask::from_fn(20, 20, |x, y| (5..15).contains(&x) && (5..15).contains(&y));
        assert_eq!(morphological_open_close(&m, 1), m);
    }

    #[test]
    fn interior_hole_is_filled() {
        // 7x7 square at (3..10) with a hole at its center (6, 6).
        let square = |x: usize, y: usize| (3..10).contains(&x) && (3..10).contains(&y);
        let holed = BinaryMask::from_fn(13, 13, |x, y| square(x, y) && (x, y) != (6, 6));

        // Hand trace: erosion keeps the 5x5 interior minus the 3x3 around the
        // hole; dilating that ring restores the holed square, so opening is a
        // no-op. Closing dilates to a full 9x9 and erodes back to a full 7x7.
        let opened = dilate(&erode(&holed, 1), 1);
        assert_eq!(opened, holed);
        assert_eq!(
            morphological_open_close(&holed, 1),
            BinaryMask::from_fn(13, 13, square)
        );
    }

    #[test]
    fn constant_masks_are_fixed_points() {
        let zeros = BinaryMask::zeros(7, 5);
        let ones = BinaryMask::from_fn(7, 5, |_, _| true);
        assert_eq!(morphological_open_close(&zeros, 1), zeros);
        assert_eq!(morphological_open_close(&ones, 2), ones);
    }
}
