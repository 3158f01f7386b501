//! 4-connected component labelling on boolean masks.

use std::collections::VecDeque;

use super::ForegroundMask;

/// Component labels in raster order; label 0 marks unselected pixels and
/// `sizes[l - 1]` is the pixel count of label `l`.
#[derive(Debug, Clone)]
pub struct Labels {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub sizes: Vec<usize>,
}

/// Labels connected runs of pixels equal to `value`. Labels are assigned in
/// the order components are first met in a raster scan.
pub fn label_components(mask: &ForegroundMask, value: bool) -> Labels {
    let (w, h) = mask.dims();
    let data = mask.data();
    let mut labels = vec![0u32; w * h];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if data[start] != value || labels[start] != 0 {
            continue;
        }
        sizes.push(0);
        let label = sizes.len() as u32;
        labels[start] = label;
        queue.push_back(start);
        while let Some(idx) = queue.pop_front() {
            sizes[label as usize - 1] += 1;
            let (x, y) = (idx % w, idx / w);
            let mut visit = |n: usize| {
                if data[n] == value && labels[n] == 0 {
                    labels[n] = label;
                    queue.push_back(n);
                }
            };
            if x > 0 {
                visit(idx - 1);
            }
            if x + 1 < w {
                visit(idx + 1);
            }
            if y > 0 {
                visit(idx - w);
            }
            if y + 1 < h {
                visit(idx + w);
            }
        }
    }
    Labels {
        width: w,
        height: h,
        labels,
        sizes,
    }
}

/// Keeps only the largest `true` component; ties go to the one met first.
pub fn largest_component(mask: &ForegroundMask) -> ForegroundMask {
    let lab = label_components(mask, true);
    let best = lab
        .sizes
        .iter()
        .enumerate()
        .fold(None::<(usize, usize)>, |acc, (i, &s)| match acc {
            Some((_, bs)) if bs >= s => acc,
            _ => Some((i, s)),
        })
        .map(|(i, _)| i as u32 + 1);
    let data = lab
        .labels
        .iter()
        .map(|&l| best.is_some_and(|b| l == b))
        .collect();
    ForegroundMask::new(lab.width, lab.height, data).expect("dimensions preserved")
}

/// Sets every `false` component that does not touch the border to `true`.
pub fn fill_holes(mask: &ForegroundMask) -> ForegroundMask {
    let lab = label_components(mask, false);
    let (w, h) = (lab.width, lab.height);
    let mut touches = vec![false; lab.sizes.len() + 1];
    for x in 0..w {
        touches[lab.labels[x] as usize] = true;
        touches[lab.labels[(h - 1) * w + x] as usize] = true;
    }
    for y in 0..h {
        touches[lab.labels[y * w] as usize] = true;
        touches[lab.labels[y * w + w - 1] as usize] = true;
    }
    let data = mask
        .data()
        .iter()
        .zip(&lab.labels)
        .map(|(&v, &l)| v || !touches[l as usize])
        .collect();
    ForegroundMask::new(w, h, data).expect("dimensions preserved")
}
