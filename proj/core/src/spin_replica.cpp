#include "stringmom/spin_replica.hpp"

#include "stringmom/string_core.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace stringmom::replica {

Spin spin_from_trade(double bid_at_close, double ask_at_open) {
	if (!(bid_at_close > 0.0) || !(ask_at_open > 0.0)) {
		throw std::invalid_argument("spin needs positive prices");
	}
	return bid_at_close - ask_at_open > 0.0 ? 1 : -1;
}

Replica make_replica(std::span<const double> bids, std::span<const double> asks, double q, Spin spin) {
	if (bids.size() != asks.size() || bids.size() < 2) {
		throw std::invalid_argument("replica windows need matching bid/ask spans of at least two prices");
	}
	const std::size_t h_op = bids.size() - 1;
	Replica r;
	r.coords.push_back(strings::two_endpoint_maps(bids, h_op, q).conjugate);
	r.coords.push_back(strings::two_endpoint_maps(asks, h_op, q).conjugate);
	r.spin = spin;
	return r;
}

double hilbert_distance(const Replica& a, const Replica& b, double p, std::size_t h_op, std::size_t d_x) {
	if (!(p >= 1.0)) {
		throw std::invalid_argument("distance exponent must be at least 1");
	}
	if (h_op < 1 || d_x < 1) {
		throw std::invalid_argument("h_op and d_X must be positive");
	}
	if (a.coords.size() != d_x + 1 || b.coords.size() != d_x + 1) {
		throw std::invalid_argument(fmt::format("replicas need {} components", d_x + 1));
	}
	double sum = 0.0;
	for (std::size_t j = 0; j <= d_x; ++j) {
		if (a.coords[j].size() != h_op + 1 || b.coords[j].size() != h_op + 1) {
			throw std::invalid_argument(fmt::format("replica components need {} samples", h_op + 1));
		}
		for (std::size_t h = 0; h <= h_op; ++h) {
			const double d = std::abs(a.coords[j][h] - b.coords[j][h]);
			sum += p == 1.0 ? d : (p == 2.0 ? d * d : std::pow(d, p));
		}
	}
	const double scaled = sum / (static_cast<double>(d_x) * static_cast<double>(h_op));
	return p == 1.0 ? scaled : (p == 2.0 ? std::sqrt(scaled) : std::pow(scaled, 1.0 / p));
}

double mean_distance(std::span<const double> distances) {
	if (distances.empty()) {
		throw std::invalid_argument("mean of an empty distance list");
	}
	double sum = 0.0;
	for (double d : distances) {
		sum += d;
	}
	return sum / static_cast<double>(distances.size());
}

std::vector<double> boltzmann_weights(std::span<const double> distances, double c_d) {
	const double mean = mean_distance(distances);
	const auto n = distances.size();
	std::vector<double> w(n, 1.0 / static_cast<double>(n));
	if (mean == 0.0) {
		return w;
	}
	// Shift by the largest exponent; the softmax is invariant to it.
	std::vector<double> expo(n);
	for (std::size_t i = 0; i < n; ++i) {
		expo[i] = -c_d * distances[i] / mean;
	}
	const double top = *std::max_element(expo.begin(), expo.end());
	double total = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		w[i] = std::exp(expo[i] - top);
		total += w[i];
	}
	for (double& wi : w) {
		wi /= total;
	}
	return w;
}

ReplicaSystem::ReplicaSystem(ReplicaGeometry geometry, std::vector<Replica> initial) : geometry_(geometry) {
	if (geometry_.h_cl <= geometry_.h_op) {
		throw std::invalid_argument("h_cl must exceed h_op");
	}
	if (geometry_.h_op < 1 || geometry_.d_x < 1 || !(geometry_.p >= 1.0)) {
		throw std::invalid_argument("replica geometry needs h_op >= 1, d_X >= 1, p >= 1");
	}
	if (initial.empty()) {
		throw std::invalid_argument("replica system needs at least one replica");
	}
	for (auto& r : initial) {
		check_shape(r);
		store_.push_back(std::move(r));
	}
}

void ReplicaSystem::check_shape(const Replica& r) const {
	if (r.coords.size() != geometry_.d_x + 1) {
		throw std::invalid_argument(fmt::format("replica needs {} components", geometry_.d_x + 1));
	}
	for (const auto& c : r.coords) {
		if (c.size() != geometry_.h_op + 1) {
			throw std::invalid_argument(fmt::format("replica components need {} samples", geometry_.h_op + 1));
		}
	}
	if (r.spin != 1 && r.spin != -1) {
		throw std::invalid_argument("spin must be -1 or +1");
	}
}

std::ptrdiff_t ReplicaSystem::reduced_index() const {
	return static_cast<std::ptrdiff_t>(last_index()) - static_cast<std::ptrdiff_t>(geometry_.h_cl - geometry_.h_op);
}

void ReplicaSystem::shift(Replica fresh) {
	check_shape(fresh);
	store_.pop_front();
	store_.push_back(std::move(fresh));
}

void ReplicaSystem::set_spin(std::size_t n, Spin spin) {
	if (n >= store_.size()) {
		throw std::out_of_range("replica index out of range");
	}
	if (spin != 1 && spin != -1) {
		throw std::invalid_argument("spin must be -1 or +1");
	}
	store_[n].spin = spin;
}

std::vector<double> ReplicaSystem::distances(const Replica& probe) const {
	const auto reduced = reduced_index();
	if (reduced < 0) {
		throw std::invalid_argument("replica store smaller than h_cl - h_op + 1");
	}
	check_shape(probe);
	std::vector<double> d(static_cast<std::size_t>(reduced) + 1);
	for (std::size_t n = 0; n < d.size(); ++n) {
		d[n] = hilbert_distance(probe, store_[n], geometry_.p, geometry_.h_op, geometry_.d_x);
	}
	return d;
}

double ReplicaSystem::fuzzy_spin(const Replica& probe) const {
	const auto d = distances(probe);
	const auto w = boltzmann_weights(d, geometry_.c_d);
	double s = 0.0;
	for (std::size_t n = 0; n < w.size(); ++n) {
		s += static_cast<double>(store_[n].spin) * w[n];
	}
	return std::clamp(s, -1.0, 1.0);
}

SpinHistograms spin_histograms(std::span<const SpinTrade> trades, std::size_t bin_width) {
	if (bin_width == 0) {
		throw std::invalid_argument("bin width must be positive");
	}
	SpinHistograms h;
	h.bin_width = bin_width;
	for (const auto& t : trades) {
		const std::size_t bin = t.interval / bin_width * bin_width;
		if (t.spin == 1) {
			++h.plus_counts[bin];
		} else if (t.spin == -1) {
			++h.minus_counts[bin];
		} else {
			throw std::invalid_argument("spin must be -1 or +1");
		}
	}
	auto normalize = [](const std::map<std::size_t, std::size_t>& counts, std::map<std::size_t, double>& out) {
		std::size_t top = 0;
		for (const auto& [bin, c] : counts) {
			top = std::max(top, c);
		}
		for (const auto& [bin, c] : counts) {
			out[bin] = static_cast<double>(c) / static_cast<double>(top);
		}
	};
	normalize(h.plus_counts, h.plus);
	normalize(h.minus_counts, h.minus);
	return h;
}

void write_spin_histogram_csv(std::ostream& out, const SpinHistograms& hist) {
	std::set<std::size_t> bins;
	for (const auto& [bin, v] : hist.plus) {
		bins.insert(bin);
	}
	for (const auto& [bin, v] : hist.minus) {
		bins.insert(bin);
	}
	out << "interval_bin,h_S_plus,h_S_minus\n";
	for (std::size_t bin : bins) {
		const auto p = hist.plus.find(bin);
		const auto m = hist.minus.find(bin);
		out << fmt::format("{},{:.10g},{:.10g}\n", bin, p == hist.plus.end() ? 0.0 : p->second,
		                   m == hist.minus.end() ? 0.0 : m->second);
	}
}

} // namespace stringmom::replica
