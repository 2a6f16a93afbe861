#include "symtrack/midi.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace symtrack {

namespace {

struct NoteOn {
    std::uint32_t tick = 0;
    std::uint8_t pitch = 0;
    std::uint8_t channel = 0;
};

struct TempoChange {
    std::uint32_t tick = 0;
    std::uint32_t us_per_quarter = 500000;  // SMF default, 120 qpm
};

struct SmfContents {
    int format = 0;
    int division = 480;
    std::vector<NoteOn> notes;
    std::vector<TempoChange> tempi;
};

class ByteReader {
public:
    ByteReader(const std::vector<std::uint8_t>& data, std::string name)
        : data_(data), name_(std::move(name)) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    std::uint8_t u8() {
        require(1);
        return data_[pos_++];
    }
    std::uint8_t peek() const {
        if (pos_ >= data_.size()) {
            throw ParseError(name_ + ": unexpected end of file");
        }
        return data_[pos_];
    }
    std::uint16_t u16() {
        require(2);
        std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        require(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) {
            v = v << 8 | data_[pos_ + k];
        }
        pos_ += 4;
        return v;
    }
    std::uint32_t varint() {
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) {
            const std::uint8_t byte = u8();
            v = v << 7 | (byte & 0x7f);
            if ((byte & 0x80) == 0) {
                return v;
            }
        }
        throw ParseError(name_ + ": variable-length quantity longer than 4 bytes");
    }
    void skip(std::size_t n) {
        require(n);
        pos_ += n;
    }
    void expect_chunk(const char* fourcc) {
        require(4);
        if (!std::equal(fourcc, fourcc + 4, data_.begin() + static_cast<std::ptrdiff_t>(pos_))) {
            throw ParseError(name_ + ": expected '" + fourcc + "' chunk");
        }
        pos_ += 4;
    }

private:
    void require(std::size_t n) const {
        if (remaining() < n) {
            throw ParseError(name_ + ": unexpected end of file");
        }
    }

    const std::vector<std::uint8_t>& data_;
    std::string name_;
    std::size_t pos_ = 0;
};

void parse_track(ByteReader& reader, const std::string& name, SmfContents& out) {
    reader.expect_chunk("MTrk");
    const std::uint32_t length = reader.u32();
    if (length > reader.remaining()) {
        throw ParseError(name + ": track length exceeds file size");
    }
    const std::size_t track_end = reader.pos() + length;

    std::uint32_t tick = 0;
    std::uint8_t running_status = 0;
    while (reader.pos() < track_end) {
        tick += reader.varint();

        std::uint8_t status = reader.peek();
        if (status & 0x80) {
            reader.skip(1);
            if (status < 0xf0) {
                running_status = status;
            }
        } else {
            if (running_status == 0) {
                throw ParseError(name + ": data byte without running status");
            }
            status = running_status;
        }

        if (status == 0xff) {  // meta event
            const std::uint8_t type = reader.u8();
            const std::uint32_t len = reader.varint();
            if (type == 0x51 && len == 3) {
                std::uint32_t us = 0;
                for (int k = 0; k < 3; ++k) {
                    us = us << 8 | reader.u8();
                }
                out.tempi.push_back(TempoChange{tick, us});
            } else {
                reader.skip(len);
                if (type == 0x2f) {  // end of track
                    break;
                }
            }
        } else if (status == 0xf0 || status == 0xf7) {  // sysex
            reader.skip(reader.varint());
        } else {
            const std::uint8_t kind = status & 0xf0;
            const std::uint8_t channel = status & 0x0f;
            switch (kind) {
                case 0x90: {  // note on; velocity 0 acts as note off
                    const std::uint8_t pitch = reader.u8();
                    const std::uint8_t velocity = reader.u8();
                    if (pitch > 0x7f || velocity > 0x7f) {
                        throw ParseError(name + ": data byte out of range");
                    }
                    if (velocity > 0) {
                        out.notes.push_back(NoteOn{tick, pitch, channel});
                    }
                    break;
                }
                case 0x80:  // note off
                case 0xa0:  // polyphonic pressure
                case 0xb0:  // controller
                case 0xe0:  // pitch bend
                    reader.skip(2);
                    break;
                case 0xc0:  // program change
                case 0xd0:  // channel pressure
                    reader.skip(1);
                    break;
                default:
                    throw ParseError(name + ": unsupported status byte " + std::to_string(status));
            }
        }
    }
    if (reader.pos() > track_end) {
        throw ParseError(name + ": event ran past the declared track length");
    }
    // Skip any padding between the last parsed event and the declared end.
    reader.skip(track_end - reader.pos());
}

SmfContents parse_smf(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw ParseError(path.string() + ": cannot open file");
    }
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(stream),
                                    std::istreambuf_iterator<char>()};
    const std::string name = path.string();
    ByteReader reader(bytes, name);

    reader.expect_chunk("MThd");
    if (reader.u32() != 6) {
        throw ParseError(name + ": bad header length");
    }
    SmfContents out;
    out.format = reader.u16();
    const std::uint16_t track_count = reader.u16();
    const std::uint16_t division = reader.u16();
    if (out.format != 0 && out.format != 1) {
        throw ParseError(name + ": unsupported SMF format " + std::to_string(out.format));
    }
    if (division & 0x8000) {
        throw UnsupportedDivisionError(name + ": SMPTE time division is not supported");
    }
    if (division == 0) {
        throw ParseError(name + ": time division must be positive");
    }
    out.division = division;

    for (std::uint16_t t = 0; t < track_count; ++t) {
        parse_track(reader, name, out);
    }
    std::stable_sort(out.tempi.begin(), out.tempi.end(),
                     [](const TempoChange& a, const TempoChange& b) { return a.tick < b.tick; });
    return out;
}

/// tick -> seconds through the tempo map, with the SMF default tempo in
/// force before the first tempo event.
class TickClock {
public:
    TickClock(const std::vector<TempoChange>& tempi, int division) : division_(division) {
        double seconds = 0.0;
        std::uint32_t tick = 0;
        std::uint32_t us = 500000;
        for (const TempoChange& change : tempi) {
            seconds += static_cast<double>(change.tick - tick) * us * 1e-6 / division_;
            tick = change.tick;
            us = change.us_per_quarter;
            segments_.push_back(Segment{tick, seconds, us});
        }
        if (segments_.empty() || segments_.front().tick > 0) {
            segments_.insert(segments_.begin(), Segment{0, 0.0, 500000});
        }
    }

    double seconds_at(std::uint32_t tick) const {
        auto it = std::upper_bound(
            segments_.begin(), segments_.end(), tick,
            [](std::uint32_t t, const Segment& seg) { return t < seg.tick; });
        const Segment& seg = *std::prev(it);
        return seg.seconds + static_cast<double>(tick - seg.tick) * seg.us_per_quarter * 1e-6 /
                                 division_;
    }

private:
    struct Segment {
        std::uint32_t tick;
        double seconds;
        std::uint32_t us_per_quarter;
    };
    std::vector<Segment> segments_;
    int division_;
};

}  // namespace

ScoreSequence load_score_midi(const std::filesystem::path& path, const ScoreMidiOptions& options) {
    SmfContents smf = parse_smf(path);

    std::map<std::uint32_t, std::vector<int>> by_tick;
    for (const NoteOn& note : smf.notes) {
        if (options.exclude_percussion && note.channel == 9) {
            continue;
        }
        by_tick[note.tick].push_back(note.pitch);
    }
    if (by_tick.empty()) {
        throw EmptyScoreError(path.string() + ": no note-on events");
    }

    ScoreSequence score;
    double group_beat = 0.0;
    std::vector<int> group_pitches;
    for (auto& [tick, pitches] : by_tick) {
        const double beat = static_cast<double>(tick) / smf.division;
        if (group_pitches.empty()) {
            group_beat = beat;
            group_pitches = std::move(pitches);
        } else if (beat - group_beat <= options.merge_epsilon_beats) {
            group_pitches.insert(group_pitches.end(), pitches.begin(), pitches.end());
        } else {
            score.onsets.emplace_back(std::move(group_pitches), group_beat);
            group_beat = beat;
            group_pitches = std::move(pitches);
        }
    }
    score.onsets.emplace_back(std::move(group_pitches), group_beat);

    validate_score(score);
    return score;
}

PerformanceStream load_performance_midi(const std::filesystem::path& path) {
    SmfContents smf = parse_smf(path);
    TickClock clock(smf.tempi, smf.division);

    PerformanceStream stream;
    stream.notes.reserve(smf.notes.size());
    for (const NoteOn& note : smf.notes) {
        stream.notes.push_back(PerformanceNote{note.pitch, clock.seconds_at(note.tick)});
    }
    std::sort(stream.notes.begin(), stream.notes.end(),
              [](const PerformanceNote& a, const PerformanceNote& b) {
                  return a.onset_s != b.onset_s ? a.onset_s < b.onset_s : a.pitch < b.pitch;
              });
    validate_performance(stream);
    return stream;
}

}  // namespace symtrack
