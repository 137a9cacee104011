#include "sortenv/server.hpp"

#include <csignal>
#include <iostream>

#include <boost/asio.hpp>

#include "sortenv/protocol.hpp"

namespace sortenv {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

constexpr std::size_t kMaxLineBytes = 1 << 20;

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, const EnvConfig& base)
      : socket_(std::move(socket)), buffer_(kMaxLineBytes), session_(base) {}

  void start() { read_next(); }

 private:
  void read_next() {
    auto self = shared_from_this();
    asio::async_read_until(socket_, buffer_, '\n',
                           [self](const boost::system::error_code& ec, std::size_t n) {
                             if (ec) return self->shutdown();
                             self->on_line(n);
                           });
  }

  void on_line(std::size_t n) {
    std::string line(asio::buffers_begin(buffer_.data()),
                     asio::buffers_begin(buffer_.data()) + static_cast<std::ptrdiff_t>(n));
    buffer_.consume(n);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    if (line.empty()) return read_next();

    reply_ = session_.handle(line);
    reply_.push_back('\n');
    auto self = shared_from_this();
    asio::async_write(socket_, asio::buffer(reply_),
                      [self](const boost::system::error_code& ec, std::size_t) {
                        if (ec || self->session_.closed()) return self->shutdown();
                        self->read_next();
                      });
  }

  void shutdown() {
    boost::system::error_code ignored;
    socket_.shutdown(tcp::socket::shutdown_both, ignored);
    socket_.close(ignored);
  }

  tcp::socket socket_;
  asio::streambuf buffer_;
  ProtocolSession session_;
  std::string reply_;
};

}  // namespace

struct EnvServer::Impl {
  Impl(EnvConfig cfg, const std::string& address, unsigned short port)
      : base(std::move(cfg)), acceptor(io) {
    base.validate();
    const tcp::endpoint endpoint(asio::ip::make_address(address), port);
    acceptor.open(endpoint.protocol());
    acceptor.set_option(tcp::acceptor::reuse_address(true));
    acceptor.bind(endpoint);
    acceptor.listen();
  }

  void accept() {
    acceptor.async_accept([this](const boost::system::error_code& ec, tcp::socket socket) {
      if (ec) {
        if (ec == asio::error::operation_aborted) return;
      } else {
        std::make_shared<Connection>(std::move(socket), base)->start();
      }
      accept();
    });
  }

  EnvConfig base;
  asio::io_context io;
  tcp::acceptor acceptor;
};

EnvServer::EnvServer(EnvConfig base, const std::string& address, unsigned short port)
    : impl_(std::make_unique<Impl>(std::move(base), address, port)) {}

EnvServer::~EnvServer() = default;

unsigned short EnvServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void EnvServer::run(bool handle_signals) {
  std::unique_ptr<asio::signal_set> signals;
  if (handle_signals) {
    signals = std::make_unique<asio::signal_set>(impl_->io, SIGINT, SIGTERM);
    signals->async_wait([this](const boost::system::error_code& ec, int) {
      if (!ec) stop();
    });
  }
  impl_->accept();
  impl_->io.run();
}

void EnvServer::stop() {
  asio::post(impl_->io, [this] {
    boost::system::error_code ignored;
    impl_->acceptor.close(ignored);
    impl_->io.stop();
  });
}

}  // namespace sortenv
