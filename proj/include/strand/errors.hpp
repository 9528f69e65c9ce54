#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strand {

/// Base class for every error raised by the library.
class StrandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public StrandError {
public:
    using StrandError::StrandError;
};

class NotAntisymmetric : public StrandError {
public:
    explicit NotAntisymmetric(double defect)
        : StrandError("matrix is not antisymmetric (defect " + std::to_string(defect) + ")"),
          defect_(defect) {}
    double defect() const { return defect_; }

private:
    double defect_;
};

class NotARotation : public StrandError {
public:
    using StrandError::StrandError;
};

/// Rotation angle too close to pi for an unambiguous logarithm.
class NearAngleApi : public StrandError {
public:
    using StrandError::StrandError;
};

class TooFarFromGroup : public StrandError {
public:
    using StrandError::StrandError;
};

class NotFlat : public StrandError {
public:
    NotFlat(double residual, double tol)
        : StrandError("connection is not flat: residual " + std::to_string(residual) +
                      " exceeds tolerance " + std::to_string(tol)),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class SingularInertia : public StrandError {
public:
    using StrandError::StrandError;
};

class Blowup : public StrandError {
public:
    Blowup(std::size_t step, double norm)
        : StrandError("simulation blew up at step " + std::to_string(step) + " (norm " +
                      std::to_string(norm) + ")"),
          step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

class ConfigError : public StrandError {
public:
    ConfigError(const std::string& key, int line, const std::string& what)
        : StrandError(format(key, line, what)), key_(key), line_(line) {}
    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string msg = "config error";
        if (!key.empty()) msg += " at " + key;
        if (line > 0) msg += " (line " + std::to_string(line) + ")";
        return msg + ": " + what;
    }
    std::string key_;
    int line_;
};

class UnknownPreset : public StrandError {
public:
    explicit UnknownPreset(const std::string& name) : StrandError("unknown preset '" + name + "'") {}
};

class IoError : public StrandError {
public:
    IoError(const std::string& path, const std::string& what)
        : StrandError(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace strand
