#pragma once

#include "form.hpp"

#include <utility>
#include <vector>

namespace zz {

template <class E>
using Terms = std::vector<std::pair<Rational, E>>;

// Entries are single basis elements x^a dx_I E_ij (coefficient pulled into the chain).
// Chains over this algebra are canonical once identity entries are expanded, so
// equality of chains is decidable exactly.
struct BasisAlgebra {
    using Elem = Basis;
    int dim = 2;
    int size = 2;

    Elem unit() const { return Basis{}; }
    int degree(const Elem& e) const { return e.degree(); }

    template <class F>
    void d(const Elem& e, F&& emit) const
    {
        basis_d(e, dim, [&](int k, const Basis& b) { emit(Rational(k), b); });
    }

    int mul(const Elem& a, const Elem& b, Elem& out) const { return basis_mul(a, b, out); }

    Terms<Elem> expand(const PolyMatrixForm& f) const
    {
        if (f.dim() != dim || f.size() != size)
            throw std::invalid_argument("form does not match the algebra");
        Terms<Elem> out;
        for (auto& [b, c] : f.terms())
            out.emplace_back(c, b);
        return out;
    }

    PolyMatrixForm to_form(const Elem& e) const
    {
        PolyMatrixForm f(dim, size);
        f.add(e, 1);
        return f;
    }

    std::string text(const Elem& e) const { return to_text(e, dim); }
};

// Entries are whole homogeneous forms; compact, used for numerics.
struct FormAlgebra {
    using Elem = PolyMatrixForm;
    int dim = 2;
    int size = 2;

    Elem unit() const { return PolyMatrixForm::unit(dim, size); }
    int degree(const Elem& e) const
    {
        int p = e.degree();
        if (p < 0)
            throw std::invalid_argument("chain entries must be homogeneous forms");
        return p;
    }

    template <class F>
    void d(const Elem& e, F&& emit) const
    {
        auto de = exterior_d(e);
        if (!de.is_zero())
            emit(Rational(1), de);
    }

    int mul(const Elem& a, const Elem& b, Elem& out) const
    {
        out = wedge(a, b);
        return out.is_zero() ? 0 : 1;
    }

    Terms<Elem> expand(const PolyMatrixForm& f) const
    {
        if (f.is_zero())
            return {};
        Terms<Elem> out;
        for (int p = 0; p <= f.max_degree(); ++p) {
            auto part = f.homogeneous_part(p);
            if (!part.is_zero())
                out.emplace_back(Rational(1), part);
        }
        return out;
    }

    PolyMatrixForm to_form(const Elem& e) const { return e; }
    std::string text(const Elem& e) const { return to_text(e); }
};

} // namespace zz
