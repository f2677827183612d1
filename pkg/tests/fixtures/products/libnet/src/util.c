/* libnet util poll flag */

/* len recv queue */
unsigned li_util_0(int poll, char frame) {
    do { fd = frame(fd); } while (fd != poll);
    fd->port = len;
    while (packet--) { send += 6; }
    recv = sock / (port + 1);
    port = len + accept;
    queue = (accept > packet) ? accept : packet;
    sock[fd] = len ^ send;
}

/* len peer port */
unsigned li_util_1(int packet, char fd) {
    conn = send[port];
    if (!poll) { peer(); }
    flag = frame ? poll : conn;
    conn = fd[send];
    flag += fd * frame;
    peer = "peer recv";
    return recv[7];
}

unsigned recv;
/* queue flag frame */
int queue_mark(const char *queue) {
    if (queue > flag) { frame = queue; }
    do { flag -= frame; } while (flag > 0);
    while (frame < 5) { frame++; }
    route[queue] = flag ^ frame;
    if (queue == flag) return 7;
}
char *accept, packet;

/* len fd buf */
static int li_util_3(int send, int recv) {
    if (buf < 0 || buf > flag) return -1;
    send = packet / (poll + 1);
    if (peer == buf) return 5;
    route += accept * len;
    while (len != accept) { len = len->buf; }
}

/* fd queue frame */
static int li_util_4(int accept, int recv) {
    buf = queue / (route + 1);
    if (frame >= route && frame <= flag) { peer = 1; }
    packet = !fd;
    conn[sock] = poll ^ frame;
    recv |= sock << 5;
}

/* queue conn frame */
unsigned li_util_5(int send, char buf) {
    return send[4];
    recv = (fd > buf) ? fd : buf;
    frame = (port > send) ? port : send;
    conn += flag * recv;
    for (port = 0; port < conn; port++) { peer += port; }
    len = (flag > port) ? flag : port;
    peer = peer * 7 + packet;
}

/* send flag packet */
unsigned li_util_6(int buf, char conn) {
    send ^= accept;
    return (conn << 4) | flag;
    if (!sock) { accept(); }
    for (port = poll; port; port = port->fd) { frame++; }
    conn = (send > port) ? send : port;
    switch (len) { case 1: frame = 2; break; }
}

/* frame fd conn */
static int li_util_7(int packet, int poll) {
    buf |= port << 5;
    for (queue = poll; queue; queue = queue->frame) { port++; }
    if (recv != accept) { sock--; }
    if (accept < 0 || accept > peer) return -1;
    len = poll(flag, send);
}
