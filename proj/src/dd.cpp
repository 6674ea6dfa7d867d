#include "dd.hpp"

#include <boost/dynamic_bitset.hpp>

namespace okb::detail {

namespace {

struct Ray {
    IVec v;
    boost::dynamic_bitset<> zero;  // processed constraints tight at v
};

int sign(const Int& z) { return sgn(z); }

}  // namespace

ConeGenerators cone_generators(const std::vector<IVec>& rows, std::size_t d) {
    const std::size_t m = rows.size();
    std::vector<IVec> lin;
    for (std::size_t i = 0; i < d; ++i) {
        IVec e(d, Int(0));
        e[i] = 1;
        lin.push_back(std::move(e));
    }
    std::vector<Ray> rays;

    for (std::size_t i = 0; i < m; ++i) {
        const IVec& h = rows[i];
        bool zero_row = true;
        for (const auto& x : h) zero_row = zero_row && x == 0;
        if (zero_row) {
            for (auto& r : rays) r.zero.set(i);
            continue;
        }

        std::size_t piv = lin.size();
        Int hl0;
        for (std::size_t j = 0; j < lin.size(); ++j) {
            hl0 = dot(h, lin[j]);
            if (hl0 != 0) {
                piv = j;
                break;
            }
        }

        if (piv < lin.size()) {
            // h cuts the lineality space: it shrinks by one and l0 turns into a ray
            const IVec l0 = lin[piv];
            const int s = sign(hl0);
            const Int a = abs(hl0);
            std::vector<IVec> next;
            for (std::size_t j = 0; j < lin.size(); ++j) {
                if (j == piv) continue;
                Int hl = dot(h, lin[j]);
                if (hl == 0) {
                    next.push_back(lin[j]);
                    continue;
                }
                IVec w(d);
                for (std::size_t c = 0; c < d; ++c) w[c] = a * lin[j][c] - s * hl * l0[c];
                next.push_back(primitive(w));
            }
            lin = std::move(next);
            for (auto& r : rays) {
                Int hr = dot(h, r.v);
                if (hr != 0) {
                    IVec w(d);
                    for (std::size_t c = 0; c < d; ++c) w[c] = a * r.v[c] - s * hr * l0[c];
                    r.v = primitive(w);
                }
                r.zero.set(i);
            }
            Ray nr;
            nr.v.resize(d);
            for (std::size_t c = 0; c < d; ++c) nr.v[c] = -s * l0[c];
            nr.v = primitive(nr.v);
            nr.zero.resize(m);
            for (std::size_t j = 0; j < i; ++j) nr.zero.set(j);
            rays.push_back(std::move(nr));
            continue;
        }

        std::vector<Int> val(rays.size());
        std::vector<std::size_t> pos, neg;
        std::vector<Ray> next;
        for (std::size_t j = 0; j < rays.size(); ++j) {
            val[j] = dot(h, rays[j].v);
            if (val[j] > 0) {
                pos.push_back(j);
            } else if (val[j] < 0) {
                neg.push_back(j);
                next.push_back(rays[j]);
            } else {
                next.push_back(rays[j]);
                next.back().zero.set(i);
            }
        }
        const std::size_t need = d - lin.size() >= 2 ? d - lin.size() - 2 : 0;
        for (std::size_t p : pos) {
            for (std::size_t q : neg) {
                boost::dynamic_bitset<> common = rays[p].zero & rays[q].zero;
                if (common.count() < need) continue;
                bool adjacent = true;
                for (std::size_t t = 0; t < rays.size() && adjacent; ++t) {
                    if (t == p || t == q) continue;
                    if (common.is_subset_of(rays[t].zero)) adjacent = false;
                }
                if (!adjacent) continue;
                Ray nr;
                nr.v.resize(d);
                for (std::size_t c = 0; c < d; ++c) nr.v[c] = val[p] * rays[q].v[c] - val[q] * rays[p].v[c];
                nr.v = primitive(nr.v);
                nr.zero = std::move(common);
                nr.zero.set(i);
                next.push_back(std::move(nr));
            }
        }
        rays = std::move(next);
    }

    ConeGenerators out;
    out.lineality = std::move(lin);
    for (auto& r : rays) out.rays.push_back(std::move(r.v));
    return out;
}

}  // namespace okb::detail
