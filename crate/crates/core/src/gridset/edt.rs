//! Exact squared Euclidean distance transform (lower envelope of parabolas,
//! applied one axis at a time).

/// Squared lattice distance from every cell to the nearest feature cell.
/// Distances are in cell units. With no feature cells every value is infinite.
pub fn squared_distance_transform(extents: &[usize], is_feature: impl Fn(usize) -> bool) -> Vec<f64> {
    let len: usize = extents.iter().product();
    let mut f: Vec<f64> = (0..len).map(|i| if is_feature(i) { 0.0 } else { f64::INFINITY }).collect();
    let mut stride = 1;
    let mut line = Vec::new();
    let mut out = Vec::new();
    let mut v = Vec::new();
    let mut z = Vec::new();
    for &n in extents {
        let outer = len / n;
        for k in 0..outer {
            // Start index of the k-th line along this axis.
            let start = (k / stride) * stride * n + k % stride;
            line.clear();
            line.extend((0..n).map(|j| f[start + j * stride]));
            transform_line(&line, &mut out, &mut v, &mut z);
            for j in 0..n {
                f[start + j * stride] = out[j];
            }
        }
        stride *= n;
    }
    f
}

fn transform_line(f: &[f64], d: &mut Vec<f64>, v: &mut Vec<usize>, z: &mut Vec<f64>) {
    let n = f.len();
    d.clear();
    d.resize(n, f64::INFINITY);
    v.clear();
    z.clear();
    for q in 0..n {
        if f[q].is_infinite() {
            continue;
        }
        if v.is_empty() {
            v.push(q);
            z.push(f64::NEG_INFINITY);
            continue;
        }
        loop {
            let p = *v.last().expect("nonempty envelope");
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= *z.last().expect("nonempty envelope") {
                v.pop();
                z.pop();
                if v.is_empty() {
                    v.push(q);
                    z.push(f64::NEG_INFINITY);
                    break;
                }
            } else {
                v.push(q);
                z.push(s);
                break;
            }
        }
    }
    if v.is_empty() {
        return;
    }
    let mut k = 0;
    for (q, dq) in d.iter_mut().enumerate() {
        while k + 1 < v.len() && z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let diff = q as f64 - p as f64;
        *dq = diff * diff + f[p];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_feature_in_3d() {
        let ext = [5, 6, 7];
        let target = 2 + 5 * (3 + 6 * 4);
        let d = squared_distance_transform(&ext, |i| i == target);
        for x in 0..5 {
            for y in 0..6 {
                for zz in 0..7 {
                    let i = x + 5 * (y + 6 * zz);
                    let e = ((x as i64 - 2).pow(2) + (y as i64 - 3).pow(2) + (zz as i64 - 4).pow(2)) as f64;
                    assert_eq!(d[i], e);
                }
            }
        }
    }

    #[test]
    fn no_features() {
        let d = squared_distance_transform(&[4, 4], |_| false);
        assert!(d.iter().all(|v| v.is_infinite()));
    }
}
