#include "stringmom/time.hpp"

#include <fmt/core.h>

#include <charconv>
#include <stdexcept>

namespace stringmom {

namespace {

int read_fixed(std::string_view text, std::size_t pos, std::size_t width) {
	int value = 0;
	const char* first = text.data() + pos;
	const char* last = first + width;
	auto [ptr, ec] = std::from_chars(first, last, value);
	if (ec != std::errc{} || ptr != last) {
		throw std::invalid_argument(fmt::format("bad timestamp '{}'", text));
	}
	return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
	if (pos >= text.size() || text[pos] != c) {
		throw std::invalid_argument(fmt::format("bad timestamp '{}'", text));
	}
}

} // namespace

Timestamp parse_timestamp(std::string_view text) {
	using namespace std::chrono;
	if (text.size() < 20) {
		throw std::invalid_argument(fmt::format("bad timestamp '{}'", text));
	}
	const int y = read_fixed(text, 0, 4);
	expect(text, 4, '-');
	const int mo = read_fixed(text, 5, 2);
	expect(text, 7, '-');
	const int d = read_fixed(text, 8, 2);
	expect(text, 10, 'T');
	const int hh = read_fixed(text, 11, 2);
	expect(text, 13, ':');
	const int mm = read_fixed(text, 14, 2);
	expect(text, 16, ':');
	const int ss = read_fixed(text, 17, 2);

	std::size_t pos = 19;
	int millis = 0;
	if (pos < text.size() && text[pos] == '.') {
		++pos;
		std::size_t digits = 0;
		while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
			if (digits < 3) {
				millis = millis * 10 + (text[pos] - '0');
			}
			++digits;
			++pos;
		}
		if (digits == 0) {
			throw std::invalid_argument(fmt::format("bad timestamp '{}'", text));
		}
		for (std::size_t k = digits; k < 3; ++k) {
			millis *= 10;
		}
	}
	expect(text, pos, 'Z');
	if (pos + 1 != text.size()) {
		throw std::invalid_argument(fmt::format("bad timestamp '{}'", text));
	}

	const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
	if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
		throw std::invalid_argument(fmt::format("bad timestamp '{}'", text));
	}
	return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
}

std::string format_timestamp(Timestamp ts) {
	using namespace std::chrono;
	const auto day_start = floor<days>(ts);
	const year_month_day ymd{day_start};
	hh_mm_ss<milliseconds> tod{ts - day_start};
	return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}.{:03d}Z", static_cast<int>(ymd.year()),
	                   static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
	                   tod.hours().count(), tod.minutes().count(), tod.seconds().count(),
	                   tod.subseconds().count());
}

std::string format_day(std::chrono::sys_days day) {
	const std::chrono::year_month_day ymd{day};
	return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
	                   static_cast<unsigned>(ymd.day()));
}

} // namespace stringmom
