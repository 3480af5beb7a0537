// Copyright 2026 The zkmitqh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZKMITQH_TESTS_ORACLES_HPP
#define ZKMITQH_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. Nothing here calls
// into the library's linear algebra.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = std::vector<std::vector<cd>>;
using RMat = std::vector<std::vector<double>>;

inline Mat zeros(size_t n) { return Mat(n, std::vector<cd>(n, 0.0)); }

inline Mat kron(const Mat& a, const Mat& b) {
    size_t ra = a.size(), rb = b.size();
    Mat out(ra * rb, std::vector<cd>(ra * rb, 0.0));
    for (size_t i = 0; i < ra; i++)
        for (size_t j = 0; j < ra; j++)
            for (size_t k = 0; k < rb; k++)
                for (size_t l = 0; l < rb; l++) out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
    return out;
}

inline Mat mul(const Mat& a, const Mat& b) {
    size_t n = a.size();
    Mat out = zeros(n);
    for (size_t i = 0; i < n; i++)
        for (size_t k = 0; k < n; k++) {
            if (a[i][k] == 0.0) continue;
            for (size_t j = 0; j < n; j++) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline Mat dagger(const Mat& a) {
    size_t n = a.size();
    Mat out = zeros(n);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) out[i][j] = std::conj(a[j][i]);
    return out;
}

// Cyclic Jacobi on a real symmetric matrix. Returns eigenvalues (unsorted).
inline std::vector<double> jacobi_eigenvalues(RMat a, std::vector<std::vector<double>>* vecs = nullptr) {
    size_t n = a.size();
    RMat v(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; i++) v[i][i] = 1;
    for (int sweep = 0; sweep < 100; sweep++) {
        double off = 0;
        for (size_t p = 0; p < n; p++)
            for (size_t q = p + 1; q < n; q++) off += a[p][q] * a[p][q];
        if (off < 1e-26) break;
        for (size_t p = 0; p < n; p++)
            for (size_t q = p + 1; q < n; q++) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (size_t k = 0; k < n; k++) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; k++) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; k++) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<double> ev(n);
    for (size_t i = 0; i < n; i++) ev[i] = a[i][i];
    if (vecs) *vecs = v;
    return ev;
}

// Hermitian eigenvalues through the real 2n x 2n embedding [[Re,-Im],[Im,Re]];
// every eigenvalue appears twice there, so keep every other one after sorting.
inline std::vector<double> hermitian_eigenvalues(const Mat& h) {
    size_t n = h.size();
    RMat r(2 * n, std::vector<double>(2 * n, 0.0));
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) {
            r[i][j] = h[i][j].real();
            r[i + n][j + n] = h[i][j].real();
            r[i][j + n] = -h[i][j].imag();
            r[i + n][j] = h[i][j].imag();
        }
    auto ev = jacobi_eigenvalues(r);
    std::sort(ev.begin(), ev.end());
    std::vector<double> out;
    for (size_t i = 0; i < ev.size(); i += 2) out.push_back(ev[i]);
    return out;
}

inline double trace_distance(const Mat& a, const Mat& b) {
    size_t n = a.size();
    Mat d = zeros(n);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) d[i][j] = a[i][j] - b[i][j];
    double s = 0;
    for (double e : hermitian_eigenvalues(d)) s += std::abs(e);
    return 0.5 * s;
}

inline Mat pauli(char c) {
    Mat m = zeros(2);
    if (c == 'I') m[0][0] = m[1][1] = 1.0;
    if (c == 'X') m[0][1] = m[1][0] = 1.0;
    if (c == 'Y') {
        m[0][1] = cd(0, -1);
        m[1][0] = cd(0, 1);
    }
    if (c == 'Z') {
        m[0][0] = 1.0;
        m[1][1] = -1.0;
    }
    return m;
}

inline Mat pauli_string(const std::string& s) {
    Mat m = {{1.0}};
    for (char c : s) m = kron(m, pauli(c));
    return m;
}

inline std::vector<cd> apply(const Mat& m, const std::vector<cd>& v) {
    std::vector<cd> out(v.size(), 0.0);
    for (size_t i = 0; i < v.size(); i++)
        for (size_t j = 0; j < v.size(); j++) out[i] += m[i][j] * v[j];
    return out;
}

inline Mat outer(const std::vector<cd>& v) {
    Mat m = zeros(v.size());
    for (size_t i = 0; i < v.size(); i++)
        for (size_t j = 0; j < v.size(); j++) m[i][j] = v[i] * std::conj(v[j]);
    return m;
}

}  // namespace oracle

#endif
