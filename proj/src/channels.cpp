#include "dualcorr/channels.hpp"

#include <cmath>

#include "dualcorr/kernels.hpp"
#include "dualcorr/rng.hpp"

namespace dualcorr {

KrausOperator::KrausOperator(std::initializer_list<std::initializer_list<cplx>> entries)
    : rows(entries.size()), cols(entries.size() ? entries.begin()->size() : 0) {
    for (const auto& r : entries) {
        if (r.size() != cols) throw ValidationError("KrausOperator: ragged rows");
        data.insert(data.end(), r.begin(), r.end());
    }
}

double KrausChannel::completeness_residual() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < input_dim; ++a)
        for (std::size_t b = 0; b < input_dim; ++b) {
            cplx s = 0.0;
            for (const auto& k : kraus_ops)
                for (std::size_t r = 0; r < k.rows; ++r) s += std::conj(k(r, a)) * k(r, b);
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

void validate_channel(const KrausChannel& ch, double tol) {
    if (ch.kraus_ops.empty()) throw ValidationError("channel has no Kraus operators");
    for (const auto& k : ch.kraus_ops)
        if (k.rows != ch.output_dim || k.cols != ch.input_dim || k.data.size() != k.rows * k.cols)
            throw ValidationError("Kraus operator shape does not match channel dimensions");
    if (const double r = ch.completeness_residual(); r > tol)
        throw ValidationError("Kraus operators are not complete (residual " + std::to_string(r) + ")");
}

MultipartiteState apply_local(const MultipartiteState& s, const KrausChannel& ch, std::size_t party) {
    const auto& dims = s.party_dims();
    if (party >= dims.size())
        throw ValidationError("apply_local: party " + std::to_string(party) + " out of range");
    if (dims[party] != ch.input_dim)
        throw ValidationError("apply_local: channel input dimension " + std::to_string(ch.input_dim) +
                              " does not match party dimension " + std::to_string(dims[party]));
    validate_channel(ch);

    std::vector<std::size_t> out_dims = dims;
    out_dims[party] = ch.output_dim;
    const std::size_t single[] = {party};
    const auto rest = complement_slots(dims.size(), single);
    const auto in_local = subregister_offsets(dims, single);
    const auto in_rest = subregister_offsets(dims, rest);
    const auto out_local = subregister_offsets(out_dims, single);
    const auto out_rest = subregister_offsets(out_dims, rest);
    const std::size_t di = ch.input_dim, dout = ch.output_dim;
    const std::size_t out_total = checked_product(out_dims, default_tolerances().max_dim);

    const ComplexMatrix& rho = s.matrix();
    ComplexMatrix out(out_total);
    std::vector<cplx> block(di * di), left(dout * di);
    for (std::size_t r = 0; r < in_rest.size(); ++r)
        for (std::size_t c = 0; c < in_rest.size(); ++c) {
            for (std::size_t a = 0; a < di; ++a)
                for (std::size_t b = 0; b < di; ++b) block[a * di + b] = rho(in_rest[r] + in_local[a], in_rest[c] + in_local[b]);
            for (const auto& k : ch.kraus_ops) {
                // left = K * block
                std::fill(left.begin(), left.end(), cplx{});
                for (std::size_t x = 0; x < dout; ++x)
                    for (std::size_t a = 0; a < di; ++a) {
                        const cplx kxa = k(x, a);
                        if (kxa != 0.0) kernels::axpy(&left[x * di], &block[a * di], di, kxa);
                    }
                // out block += left * K^dagger
                for (std::size_t x = 0; x < dout; ++x)
                    for (std::size_t y = 0; y < dout; ++y) {
                        cplx acc = 0.0;
                        for (std::size_t b = 0; b < di; ++b) acc += left[x * di + b] * std::conj(k(y, b));
                        out(out_rest[r] + out_local[x], out_rest[c] + out_local[y]) += acc;
                    }
            }
        }
    Tolerances loose;
    loose.trace = 1e-8;
    loose.hermiticity = 1e-8;
    return MultipartiteState(std::move(out), std::move(out_dims), loose);
}

namespace {

void check_parameter(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError(std::string(name) + " parameter must lie in [0, 1]");
}

KrausChannel qubit_channel(std::vector<KrausOperator> ops) { return KrausChannel{2, 2, std::move(ops)}; }

}  // namespace

KrausChannel depolarizing(double lambda) {
    check_parameter(lambda, "depolarizing");
    const double a = std::sqrt(1.0 - 0.75 * lambda);
    const double b = std::sqrt(0.25 * lambda);
    const cplx i{0.0, 1.0};
    return qubit_channel({
        {{a, 0.0}, {0.0, a}},
        {{0.0, b}, {b, 0.0}},
        {{0.0, -i * b}, {i * b, 0.0}},
        {{b, 0.0}, {0.0, -b}},
    });
}

KrausChannel dephasing(double gamma) {
    check_parameter(gamma, "dephasing");
    const double a = std::sqrt(1.0 - 0.5 * gamma);
    const double b = std::sqrt(0.5 * gamma);
    return qubit_channel({
        {{a, 0.0}, {0.0, a}},
        {{b, 0.0}, {0.0, -b}},
    });
}

KrausChannel amplitude_damping(double gamma) {
    check_parameter(gamma, "amplitude damping");
    return qubit_channel({
        {{1.0, 0.0}, {0.0, std::sqrt(1.0 - gamma)}},
        {{0.0, std::sqrt(gamma)}, {0.0, 0.0}},
    });
}

KrausChannel identity_channel(std::size_t dim) {
    KrausOperator id(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) id(i, i) = 1.0;
    return KrausChannel{dim, dim, {id}};
}

KrausChannel standard_channel(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ValidationError("channel spec must be <name>:<parameter>");
    const std::string name = spec.substr(0, colon);
    double x = 0.0;
    try {
        std::size_t used = 0;
        x = std::stod(spec.substr(colon + 1), &used);
        if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ValidationError("bad channel parameter in '" + spec + "'");
    }
    if (name == "depolarizing") return depolarizing(x);
    if (name == "dephasing") return dephasing(x);
    if (name == "amplitude-damping") return amplitude_damping(x);
    throw ValidationError("unknown channel '" + name + "'");
}

KrausChannel random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed) {
    if (dim < 1) throw ValidationError("random_channel: dim must be positive");
    if (kraus_count < 1) throw ValidationError("random_channel: need at least one Kraus operator");
    const std::size_t rows = dim * kraus_count;
    Rng rng(seed);
    // Columns of the isometry, Gram-Schmidt'd twice.
    std::vector<std::vector<cplx>> cols(dim, std::vector<cplx>(rows));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < dim; ++k) cols[k][i] = rng.complex_normal();
    for (std::size_t k = 0; k < dim; ++k) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t j = 0; j < k; ++j) {
                const cplx proj = kernels::dotc(cols[j].data(), cols[k].data(), rows);
                kernels::axpy(cols[k].data(), cols[j].data(), rows, -proj);
            }
        const double norm = std::sqrt(kernels::norm2(cols[k].data(), rows));
        for (auto& x : cols[k]) x /= norm;
    }
    KrausChannel ch{dim, dim, {}};
    for (std::size_t b = 0; b < kraus_count; ++b) {
        KrausOperator k(dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) k(r, c) = cols[c][b * dim + r];
        ch.kraus_ops.push_back(std::move(k));
    }
    return ch;
}

}  // namespace dualcorr
