use lapgram::*;
use ndarray::{Array1, Array2};

fn lu_solve(a: &Array2<f64>, b: &Array1<f64>) -> Array1<f64> {
    // replicate the crate's factor/solve to inspect behavior
    let n = a.nrows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if lu[[row, col]].abs() > lu[[pivot, col]].abs() { pivot = row; }
        }
        if pivot != col {
            for k in 0..n { lu.swap([pivot, k], [col, k]); }
            perm.swap(pivot, col);
        }
        let d = lu[[col, col]];
        for row in col + 1..n {
            let f = lu[[row, col]] / d;
            lu[[row, col]] = f;
            for k in col + 1..n { lu[[row, k]] -= f * lu[[col, k]]; }
        }
    }
    let mut x = Array1::zeros(n);
    for i in 0..n {
        let mut acc = b[perm[i]];
        for k in 0..i { acc -= lu[[i, k]] * x[k]; }
        x[i] = acc;
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        for k in i + 1..n { acc -= lu[[i, k]] * x[k]; }
        x[i] = acc / lu[[i, i]];
    }
    x
}

fn main() {
    // grounded positive block of segment(5): tridiag with endpoint 1
    let n = 5;
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        a[[i, i]] = if i == n - 1 { 1.0 } else { 2.0 };
        if i > 0 { a[[i, i - 1]] = -1.0; }
        if i < n - 1 { a[[i, i + 1]] = -1.0; }
    }
    let mut b = Array1::zeros(n);
    b[1] = 1.0; // x = 2
    let mut x = lu_solve(&a, &b);
    println!("x0 = {:?}", x);
    for it in 0..4 {
        let r = &b - &a.dot(&x);
        println!("iter {it}: residual = {:?}", r);
        let e = lu_solve(&a, &r);
        println!("         correction = {:?}", e);
        x = &x + &e;
        println!("         x = {:?}", x);
    }
}
