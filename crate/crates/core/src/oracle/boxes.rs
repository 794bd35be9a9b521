//! Discrete maximal operators on cubic boxes in dimension two and higher.

use std::collections::VecDeque;

use serde::Serialize;

use super::GridFunction;
use crate::error::{Error, Result};
use crate::norm::NormKind;
use crate::opnorm::ball_volume;

/// Largest number of samples accepted by the box oracles.
pub const MAX_SAMPLES: usize = 20_000_000;
/// Largest number of elementary operations accepted by the masked oracles.
pub const MAX_MASK_WORK: f64 = 4e9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxMax {
    pub max: GridFunction,
    /// `(radius in steps, relative volume error)` of every rasterized ball used.
    pub mask_volume_errors: Vec<(usize, f64)>,
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

fn unflatten(mut flat: usize, shape: &[usize], idx: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        idx[k] = flat % shape[k];
        flat /= shape[k];
    }
}

/// `out[i] = max(inp[max(0, i - k) ..= min(i, m - 1)])` for `i < out.len()`.
fn range_max(inp: &[f64], k: usize, out: &mut [f64]) {
    let m = inp.len();
    let mut q: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for (i, o) in out.iter_mut().enumerate() {
        let hi = i.min(m - 1);
        while next <= hi {
            while q.back().map_or(false, |&j| inp[j] <= inp[next]) {
                q.pop_back();
            }
            q.push_back(next);
            next += 1;
        }
        let lo = i.saturating_sub(k);
        while q[0] < lo {
            q.pop_front();
        }
        *o = inp[q[0]];
    }
}

/// Applies [`range_max`] along `axis`, growing that axis to `n_out`.
fn range_max_axis(data: &[f64], shape: &[usize], axis: usize, k: usize, n_out: usize) -> (Vec<f64>, Vec<usize>) {
    let mut out_shape = shape.to_vec();
    out_shape[axis] = n_out;
    let in_st = strides(shape);
    let out_st = strides(&out_shape);
    let total_out: usize = out_shape.iter().product();
    let mut out = vec![0.0; total_out];
    let lines = total_out / n_out;
    let mut line_shape = out_shape.clone();
    line_shape[axis] = 1;
    let mut idx = vec![0usize; shape.len()];
    let mut inp = vec![0.0; shape[axis]];
    let mut res = vec![0.0; n_out];
    for l in 0..lines {
        unflatten(l, &line_shape, &mut idx);
        let base_in: usize = idx.iter().zip(&in_st).map(|(i, s)| i * s).sum();
        let base_out: usize = idx.iter().zip(&out_st).map(|(i, s)| i * s).sum();
        for (j, x) in inp.iter_mut().enumerate() {
            *x = data[base_in + j * in_st[axis]];
        }
        range_max(&inp, k, &mut res);
        for (j, &r) in res.iter().enumerate() {
            out[base_out + j * out_st[axis]] = r;
        }
    }
    (out, out_shape)
}

/// Maximal function over axis-parallel cubes whose corners are grid nodes.
/// Cube averages are exact for the multilinear interpolant.
fn linf_max(f: &GridFunction) -> Result<Vec<f64>> {
    let d = f.dim();
    let n = f.n();
    let v = f.values();
    let c = n - 1;

    // cell averages, then a summed-volume table of shape n^d with a zero border
    let cell_shape = vec![c; d];
    let node_st = strides(&vec![n; d]);
    let ncells: usize = cell_shape.iter().product();
    let mut sat = vec![0.0; v.len()];
    let mut idx = vec![0usize; d];
    let corners = 1usize << d;
    for cell in 0..ncells {
        unflatten(cell, &cell_shape, &mut idx);
        let base: usize = idx.iter().zip(&node_st).map(|(i, s)| i * s).sum();
        let mut acc = 0.0;
        for e in 0..corners {
            let off: usize = (0..d).filter(|k| e >> k & 1 == 1).map(|k| node_st[k]).sum();
            acc += v[base + off];
        }
        let shifted: usize = base + node_st.iter().sum::<usize>();
        sat[shifted] = acc / corners as f64;
    }
    let node_shape = vec![n; d];
    for axis in 0..d {
        let st = node_st[axis];
        for flat in 0..sat.len() {
            unflatten(flat, &node_shape, &mut idx);
            if idx[axis] > 0 {
                sat[flat] += sat[flat - st];
            }
        }
    }

    let mut best = v.to_vec();
    for k in 1..n {
        let m = n - k;
        let win_shape = vec![m; d];
        let nwin: usize = win_shape.iter().product();
        let scale = 1.0 / (k as f64).powi(d as i32);
        let mut win = vec![0.0; nwin];
        for (w, slot) in win.iter_mut().enumerate() {
            unflatten(w, &win_shape, &mut idx);
            let base: usize = idx.iter().zip(&node_st).map(|(i, s)| i * s).sum();
            let mut acc = 0.0;
            for e in 0..corners {
                let ones = (0..d).filter(|q| e >> q & 1 == 1).count();
                let off: usize = (0..d).filter(|q| e >> q & 1 == 1).map(|q| k * node_st[q]).sum();
                let sign = if (d - ones) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * sat[base + off];
            }
            *slot = acc * scale;
        }
        let mut data = win;
        let mut shape = win_shape;
        for axis in 0..d {
            let (nd, ns) = range_max_axis(&data, &shape, axis, k, n);
            data = nd;
            shape = ns;
        }
        for (b, x) in best.iter_mut().zip(&data) {
            if *x > *b {
                *b = *x;
            }
        }
    }
    Ok(best)
}

/// Maximal function over rasterized balls centred at nodes with integer radii
/// (in grid steps), kept inside the box.
fn masked_max(f: &GridFunction, norm: &NormKind) -> Result<(Vec<f64>, Vec<(usize, f64)>)> {
    let d = f.dim();
    let n = f.n();
    let v = f.values();
    let st = strides(&vec![n; d]);
    let rmax = (n - 1) / 2;

    let vol = ball_volume(norm, d).ok_or_else(|| Error::Unsupported("masked balls need an lp norm".into()))?;
    let mut masks: Vec<Vec<isize>> = Vec::with_capacity(rmax + 1);
    let mut vol_err = Vec::with_capacity(rmax);
    let mut work = 0.0;
    for r in 0..=rmax {
        let side = 2 * r + 1;
        let shape = vec![side; d];
        let total: usize = shape.iter().product();
        let mut mask = Vec::new();
        let mut idx = vec![0usize; d];
        let mut o = vec![0.0; d];
        for flat in 0..total {
            unflatten(flat, &shape, &mut idx);
            for q in 0..d {
                o[q] = idx[q] as f64 - r as f64;
            }
            if norm.eval(&o) <= r as f64 + 1e-9 {
                let lin: isize = idx.iter().zip(&st).map(|(&i, s)| (i as isize - r as isize) * *s as isize).sum();
                mask.push(lin);
            }
        }
        if r > 0 {
            let exact = vol * (r as f64).powi(d as i32);
            vol_err.push((r, (mask.len() as f64 - exact).abs() / exact));
        }
        work += 2.0 * mask.len() as f64 * ((n - 2 * r) as f64).powi(d as i32);
        masks.push(mask);
    }
    if work > MAX_MASK_WORK {
        return Err(Error::GridTooLarge(format!(
            "masked {} oracle needs about {work:.1e} operations",
            norm.label()
        )));
    }

    let mut best = v.to_vec();
    let mut idx = vec![0usize; d];
    for centre in 0..v.len() {
        unflatten(centre, &vec![n; d], &mut idx);
        let reach = idx.iter().map(|&i| i.min(n - 1 - i)).min().unwrap_or(0);
        for mask in masks.iter().take(reach + 1).skip(1) {
            let sum: f64 = mask.iter().map(|lin| v[(centre as isize + lin) as usize]).sum();
            let avg = sum / mask.len() as f64;
            for lin in mask {
                let j = (centre as isize + lin) as usize;
                if avg > best[j] {
                    best[j] = avg;
                }
            }
        }
    }
    Ok((best, vol_err))
}

/// Discrete uncentered maximal function on a cubic box grid.
pub fn grid_max_box(f: &GridFunction, norm: &NormKind) -> Result<BoxMax> {
    f.require_cubic()?;
    if f.values().len() > MAX_SAMPLES {
        return Err(Error::GridTooLarge(format!("{} samples exceed {MAX_SAMPLES}", f.values().len())));
    }
    let (vals, err) = match norm.canonical() {
        NormKind::Linf => (linf_max(f)?, Vec::new()),
        NormKind::L1 | NormKind::L2 => masked_max(f, norm)?,
        other => return Err(Error::Unsupported(format!("box oracle does not support {}", other.label()))),
    };
    Ok(BoxMax {
        max: f.with_values(vals)?,
        mask_volume_errors: err,
    })
}

/// Offsets in `[-m, m]^d` with first nonzero entry positive.
fn half_offsets(d: usize, m: usize) -> Vec<Vec<isize>> {
    let side = 2 * m + 1;
    let shape = vec![side; d];
    let total: usize = shape.iter().product();
    let mut idx = vec![0usize; d];
    let mut out = Vec::new();
    for flat in 0..total {
        unflatten(flat, &shape, &mut idx);
        let o: Vec<isize> = idx.iter().map(|&i| i as isize - m as isize).collect();
        if o.iter().find(|&&x| x != 0).map_or(false, |&x| x > 0) {
            out.push(o);
        }
    }
    out
}

/// `max |f(x + o) - f(x)|` over nodes with `x + o` inside the grid.
fn max_diff_at(f: &GridFunction, o: &[isize]) -> f64 {
    let d = f.dim();
    let n = f.n() as isize;
    let st = strides(&vec![f.n(); d]);
    let v = f.values();
    let lin: isize = o.iter().zip(&st).map(|(a, s)| a * *s as isize).sum();
    let mut idx = vec![0usize; d];
    let mut best = 0.0_f64;
    for flat in 0..v.len() {
        unflatten(flat, &vec![f.n(); d], &mut idx);
        if idx.iter().zip(o).all(|(&i, &a)| (0..n).contains(&(i as isize + a))) {
            best = best.max((v[(flat as isize + lin) as usize] - v[flat]).abs());
        }
    }
    best
}

/// `sup |f(x) - f(y)| / |x - y|^alpha` over node pairs with offsets in `[-m, m]^d`.
pub fn holder_constant_box(f: &GridFunction, alpha: f64, norm: &NormKind, m: usize) -> Result<f64> {
    let h = f.require_cubic()?;
    let mut best = 0.0_f64;
    let mut off = vec![0.0; f.dim()];
    for o in half_offsets(f.dim(), m) {
        for (x, &a) in off.iter_mut().zip(&o) {
            *x = a as f64 * h;
        }
        let dist = norm.eval(&off).powf(alpha);
        best = best.max(max_diff_at(f, &o) / dist);
    }
    Ok(best)
}

/// `sup |f(x) - f(y)|` over node pairs at distance at most `t`.
pub(crate) fn modulus_box(f: &GridFunction, t: f64, norm: &NormKind) -> Result<f64> {
    let h = f.require_cubic()?;
    let m = ((t / h) + 1e-9).floor().max(0.0) as usize;
    let m = m.min(f.n() - 1);
    let mut best = 0.0_f64;
    let mut off = vec![0.0; f.dim()];
    for o in half_offsets(f.dim(), m) {
        for (x, &a) in off.iter_mut().zip(&o) {
            *x = a as f64 * h;
        }
        if norm.eval(&off) <= t * (1.0 + 1e-12) {
            best = best.max(max_diff_at(f, &o));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(x: &[f64]) -> f64 {
        (1.0 - NormKind::Linf.eval(x)).max(0.0)
    }

    #[test]
    fn range_max_clips() {
        let mut out = vec![0.0; 5];
        range_max(&[3.0, 1.0, 2.0], 2, &mut out);
        assert_eq!(out, vec![3.0, 3.0, 3.0, 2.0, 2.0]);
    }

    #[test]
    fn cone_peak_and_domination() {
        let f = GridFunction::sample_box(&[-2.0, -2.0], &[2.0, 2.0], 33, cone).unwrap();
        let m = grid_max_box(&f, &NormKind::Linf).unwrap();
        assert_eq!(m.max.values()[16 * 33 + 16], 1.0);
        for (a, b) in m.max.values().iter().zip(f.values()) {
            assert!(a >= b);
        }
    }

    #[test]
    fn linf_matches_brute_force() {
        let f = GridFunction::sample_box(&[0.0, 0.0], &[1.0, 1.0], 9, |x| (3.0 * x[0]).sin() * x[1] + x[0]).unwrap();
        let fast = grid_max_box(&f, &NormKind::Linf).unwrap().max;
        let n = 9;
        let v = f.values();
        let mut brute = v.to_vec();
        for k in 1..n {
            for a in 0..n - k {
                for b in 0..n - k {
                    let mut acc = 0.0;
                    for i in a..a + k {
                        for j in b..b + k {
                            acc += (v[i * n + j] + v[(i + 1) * n + j] + v[i * n + j + 1] + v[(i + 1) * n + j + 1]) / 4.0;
                        }
                    }
                    let avg = acc / (k * k) as f64;
                    for i in a..=a + k {
                        for j in b..=b + k {
                            brute[i * n + j] = brute[i * n + j].max(avg);
                        }
                    }
                }
            }
        }
        for (x, y) in fast.values().iter().zip(&brute) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn masks_and_constants() {
        let f = GridFunction::sample_box(&[-1.0, -1.0], &[1.0, 1.0], 21, |_| 0.25).unwrap();
        for norm in [NormKind::L1, NormKind::L2] {
            let m = grid_max_box(&f, &norm).unwrap();
            assert!(m.max.values().iter().all(|&v| (v - 0.25).abs() < 1e-14));
            let errs = &m.mask_volume_errors;
            let (r, e) = *errs.last().unwrap();
            assert_eq!(r, 10);
            // lattice counts overshoot the volume by O(1/r)
            assert!(e < 0.15 && e < errs[2].1, "{}: {e}", norm.label());
        }
        let f3 = GridFunction::sample_box(&[0.0; 3], &[1.0; 3], 9, |x| x[0] + x[1] - x[2]).unwrap();
        let m = grid_max_box(&f3, &NormKind::Linf).unwrap();
        assert!(m.max.values().iter().zip(f3.values()).all(|(a, b)| a >= b));
    }

    #[test]
    fn guards() {
        let f = GridFunction::sample_box(&[0.0, 0.0], &[1.0, 2.0], 5, |_| 0.0).unwrap();
        assert!(grid_max_box(&f, &NormKind::Linf).is_err());
        let big = GridFunction::sample_box(&[0.0, 0.0], &[1.0, 1.0], 1001, |_| 0.0).unwrap();
        assert!(matches!(grid_max_box(&big, &NormKind::L2), Err(Error::GridTooLarge(_))));
    }

    #[test]
    fn holder_of_linear_function() {
        let f = GridFunction::sample_box(&[0.0, 0.0], &[1.0, 1.0], 11, |x| x[0] + x[1]).unwrap();
        let lip_inf = holder_constant_box(&f, 1.0, &NormKind::Linf, 2).unwrap();
        assert!((lip_inf - 2.0).abs() < 1e-12);
        let lip_1 = holder_constant_box(&f, 1.0, &NormKind::L1, 2).unwrap();
        assert!((lip_1 - 1.0).abs() < 1e-12);
        assert!((modulus_box(&f, 0.1, &NormKind::Linf).unwrap() - 0.2).abs() < 1e-12);
    }
}
