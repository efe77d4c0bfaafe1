package router

import "strings"

type Route struct {
	Path   string
	Method string
}

// Match reports whether the route accepts the request.
func (r *Route) Match(method, path string) bool {
	if r.Method != method {
		return false
	}
	return strings.HasPrefix(path, r.Path) || path == "*"
}

func Split(path string) []string {
	parts := []string{}
	for _, p := range strings.Split(path, "/") {
		if p != "" {
			parts = append(parts, p)
		}
	}
	return parts
}

func Wait(done chan bool, stop chan int) int {
	for {
		select {
		case <-done:
			return 1
		case v := <-stop:
			if v > 0 && v < 10 {
				return v
			}
		}
	}
}
