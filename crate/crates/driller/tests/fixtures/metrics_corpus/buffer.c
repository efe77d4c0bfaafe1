#include <stdio.h>
#include <string.h>

/* Copies at most n bytes. */
static int copy_bytes(char *dst, const char *src, int n)
{
    int i;
    for (i = 0; i < n && src[i] != '\0'; i++) {
        dst[i] = src[i];
    }
    return i;
}

int clamp(int v, int lo, int hi)
{
    return v < lo ? lo : (v > hi ? hi : v);
}

int version(void)
{
    return 3;
}

int parse_flag(const char *arg)
{
    switch (arg[0]) {
    case 'a':
        return 1;
    case 'b':
    case 'c':
        return 2;
    default:
        return 0;
    }
}
